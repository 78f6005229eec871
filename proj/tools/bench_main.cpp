// Compares the serial reference against the OpenMP evaluation on a
// synthetic population and checks the outcomes are identical.

#include <chrono>
#include <cmath>
#include <cstring>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dresp/simulate.hpp"

using namespace dresp;

namespace {

struct BenchSetup {
    std::vector<Customer> population;
    std::map<std::string, ClassContext> classes;
    PeriodPartition partition;
    ModelParams params;
};

BenchSetup make_setup(int customers) {
    BenchSetup setup;

    PeriodConfig pc;
    pc.horizon_hours = 24;
    pc.peak = {{8, 12}, {18, 23}};
    pc.valley = {{12, 18}};
    pc.off_peak = {{0, 8}, {23, 24}};
    setup.partition = classify_hours(pc);

    PriceSignal signal;
    signal.horizon_hours = 24;
    signal.nominal_price_cents = 5.0;
    signal.utility_price_cents.resize(24);
    for (int t = 0; t < 24; ++t) {
        signal.utility_price_cents[static_cast<size_t>(t)] =
            setup.partition.is_peak(t) ? 7.5 : 4.2;
    }

    CustomerClass cls;
    cls.name = "bench";
    cls.kappa = 0.0;
    cls.self_elasticity = -0.35;
    cls.min_demand_kw = 2.0;
    cls.max_demand_kw = 40.0;
    cls.lf_mean.resize(24);
    cls.lf_cov.assign(24, 0.1);
    for (int t = 0; t < 24; ++t) {
        cls.lf_mean[static_cast<size_t>(t)] =
            0.55 + 0.35 * std::sin(3.14159 * (t + 1) / 24.0);
    }

    ClassContext ctx;
    ctx.cls = cls;
    ctx.price = build_class_price(signal, cls.kappa);
    setup.classes["bench"] = ctx;

    RngStream rng(derive_seed(42, "bench-population"));
    setup.population.reserve(static_cast<size_t>(customers));
    for (int i = 0; i < customers; ++i) {
        const double rated = rng.uniform(cls.min_demand_kw, cls.max_demand_kw);
        setup.population.push_back(synthesize_customer(cls, 1, rated, rng, i + 1));
    }

    setup.params.gbm.mu = 0.2;
    setup.params.gbm.sigma = 1.2;
    setup.params.gbm.recovery_window = 4;
    setup.params.gbm.seed = derive_seed(42, "gbm", 0);
    return setup;
}

double run_timed(PemModel model, const BenchSetup& setup, ExecMode exec, int repeats,
                 std::vector<DrOutcome>& last) {
    const auto start = std::chrono::steady_clock::now();
    for (int r = 0; r < repeats; ++r) {
        last = evaluate_model(model, setup.population, setup.classes, setup.partition,
                              setup.params, exec);
    }
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
               .count() /
           repeats;
}

bool identical(const std::vector<DrOutcome>& a, const std::vector<DrOutcome>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (std::memcmp(a[i].demand_adr_kw.data(), b[i].demand_adr_kw.data(),
                        a[i].demand_adr_kw.size() * sizeof(double)) != 0) {
            return false;
        }
        if (a[i].lambda_used != b[i].lambda_used) return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    int customers = 4000;
    int repeats = 5;
    for (int i = 1; i + 1 < argc; i += 2) {
        if (std::string(argv[i]) == "--customers") customers = std::atoi(argv[i + 1]);
        if (std::string(argv[i]) == "--repeats") repeats = std::atoi(argv[i + 1]);
    }

#ifdef _OPENMP
    std::cout << "openmp threads: " << omp_get_max_threads() << '\n';
#else
    std::cout << "openmp: not available, parallel mode runs serially\n";
#endif
    std::cout << "customers: " << customers << ", repeats: " << repeats << "\n\n";

    BenchSetup setup = make_setup(customers);
    std::cout << "model   serial(ms)  parallel(ms)  speedup  identical\n";
    bool all_identical = true;
    for (PemModel model : {PemModel::pem, PemModel::dpem, PemModel::spem}) {
        std::vector<DrOutcome> serial_out, parallel_out;
        const double ts = run_timed(model, setup, ExecMode::serial, repeats, serial_out);
        const double tp = run_timed(model, setup, ExecMode::parallel, repeats, parallel_out);
        const bool same = identical(serial_out, parallel_out);
        all_identical = all_identical && same;
        std::printf("%-7s %10.2f %12.2f %8.2fx  %s\n", model_name(model), ts, tp,
                    ts / tp, same ? "yes" : "NO");
    }
    return all_identical ? 0 : 1;
}
