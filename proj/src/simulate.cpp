#include "dresp/simulate.hpp"

namespace dresp {

namespace {

PeakSpec resolve_peak_spec(const ModelParams& params, const CustomerClass& cls) {
    PeakSpec spec;
    spec.mode = params.peak_mode;
    spec.alpha = params.peak_alpha;
    spec.peak_elasticity =
        params.peak_elasticity_override ? params.peak_elasticity : cls.self_elasticity;
    return spec;
}

LambdaMode lambda_mode_for(PemModel model, const ModelParams& params) {
    switch (model) {
        case PemModel::pem: return params.pem_lambda;
        case PemModel::dpem: return params.dpem_lambda;
        case PemModel::spem: return params.spem_lambda;
    }
    return LambdaMode::zero;
}

DrOutcome evaluate_customer(PemModel model, const Customer& customer,
                            const ClassContext& ctx, const PeriodPartition& partition,
                            const ModelParams& params,
                            const ElasticityMatrix* class_matrix) {
    ElasticityMatrix own;
    const ElasticityMatrix* matrix = class_matrix;
    if (matrix == nullptr) {
        own = build_model_matrix(model, customer, ctx, partition, params);
        matrix = &own;
    }

    DrConfig config;
    config.floor_demand_kw = params.floor_demand_kw;
    config.lambda_mode = lambda_mode_for(model, params);
    if (config.lambda_mode == LambdaMode::balance_solve) {
        const LambdaSolve solve =
            solve_lambda(customer.baseline_kw, ctx.price, *matrix, partition);
        // Unreachable constraint falls back to the zero multiplier.
        config.lambda_value = solve.constraint_unreachable ? 0.0 : solve.lambda;
    }
    return respond(customer.baseline_kw, ctx.price, *matrix, partition, config);
}

}  // namespace

ElasticityMatrix build_model_matrix(PemModel model, const Customer& customer,
                                    const ClassContext& ctx,
                                    const PeriodPartition& partition,
                                    const ModelParams& params) {
    switch (model) {
        case PemModel::pem:
            return build_pem_matrix(ctx.cls.self_elasticity, partition,
                                    params.pem_cross_fraction);
        case PemModel::dpem: {
            const PeakSpec spec = resolve_peak_spec(params, ctx.cls);
            return diagonal_matrix(build_dpem_diagonal(customer, ctx.price, spec),
                                   PemModel::dpem);
        }
        case PemModel::spem: {
            RngStream rng(derive_seed(params.gbm.seed, "customer",
                                      static_cast<uint64_t>(customer.id)));
            return build_spem_matrix(customer, ctx.cls.self_elasticity, partition,
                                     params.gbm, rng);
        }
    }
    throw std::runtime_error("evaluate_model: unknown model");
}

std::vector<DrOutcome> evaluate_model(PemModel model,
                                      const std::vector<Customer>& population,
                                      const std::map<std::string, ClassContext>& classes,
                                      const PeriodPartition& partition,
                                      const ModelParams& params, ExecMode exec) {
    // The benchmark matrix depends only on the class; build each once.
    std::map<std::string, ElasticityMatrix> pem_matrices;
    if (model == PemModel::pem) {
        for (const auto& [name, ctx] : classes) {
            pem_matrices.emplace(name, build_pem_matrix(ctx.cls.self_elasticity,
                                                        partition,
                                                        params.pem_cross_fraction));
        }
    }

    for (const Customer& customer : population) {
        if (classes.find(customer.class_name) == classes.end()) {
            throw ValidationError("evaluate_model: unknown class " + customer.class_name);
        }
    }

    const int n = static_cast<int>(population.size());
    std::vector<DrOutcome> outcomes(population.size());
    std::exception_ptr failure;

    auto run_one = [&](int i) {
        const Customer& customer = population[static_cast<size_t>(i)];
        const ClassContext& ctx = classes.at(customer.class_name);
        const ElasticityMatrix* class_matrix = nullptr;
        if (model == PemModel::pem) class_matrix = &pem_matrices.at(customer.class_name);
        outcomes[static_cast<size_t>(i)] =
            evaluate_customer(model, customer, ctx, partition, params, class_matrix);
    };

    if (exec == ExecMode::parallel) {
        // Exceptions cannot cross the parallel region; stash the first one.
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            try {
                run_one(i);
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
    } else {
        for (int i = 0; i < n; ++i) run_one(i);
    }
    return outcomes;
}

}  // namespace dresp
