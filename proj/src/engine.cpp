#include "dresp/engine.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace dresp {

namespace {

void check_dimensions(const std::vector<double>& baseline, const ClassPrice& price,
                      const ElasticityMatrix& matrix, const PeriodPartition& partition) {
    const size_t T = baseline.size();
    if (T == 0 || price.class_price_cents.size() != T ||
        static_cast<size_t>(matrix.horizon_hours) != T ||
        static_cast<size_t>(partition.horizon_hours) != T) {
        throw ValidationError("respond: baseline/price/matrix/partition sizes disagree");
    }
}

std::vector<double> price_deviation(const ClassPrice& price, double lambda) {
    std::vector<double> dev(price.class_price_cents.size());
    for (size_t tau = 0; tau < dev.size(); ++tau) {
        dev[tau] =
            (price.class_price_cents[tau] - price.class_nominal_cents + lambda) /
            price.class_nominal_cents;
        if (!std::isfinite(dev[tau])) {
            throw ValidationError("respond: non-finite price deviation");
        }
    }
    return dev;
}

// Balance residual without the demand floor; affine in lambda.
double residual_unclamped(const std::vector<double>& baseline, const ClassPrice& price,
                          const ElasticityMatrix& matrix,
                          const PeriodPartition& partition, double lambda) {
    const int T = static_cast<int>(baseline.size());
    const std::vector<double> dev = price_deviation(price, lambda);
    double curtailed = 0.0, shifted = 0.0;
    for (int t = 0; t < T; ++t) {
        double s = 0.0;
        for (int tau = 0; tau < T; ++tau) {
            s += matrix.at(t, tau) * dev[static_cast<size_t>(tau)];
        }
        const double delta = baseline[static_cast<size_t>(t)] * s;
        if (partition.is_peak(t)) {
            curtailed -= delta;
        } else {
            shifted += delta;
        }
    }
    return curtailed - shifted;
}

}  // namespace

DrOutcome respond(const std::vector<double>& baseline_kw, const ClassPrice& class_price,
                  const ElasticityMatrix& matrix, const PeriodPartition& partition,
                  const DrConfig& config) {
    check_dimensions(baseline_kw, class_price, matrix, partition);
    const double lambda =
        config.lambda_mode == LambdaMode::zero ? 0.0 : config.lambda_value;
    const std::vector<double> dev = price_deviation(class_price, lambda);

    const int T = static_cast<int>(baseline_kw.size());
    DrOutcome out;
    out.lambda_used = lambda;
    out.demand_adr_kw.resize(static_cast<size_t>(T));
    out.delta_kw.resize(static_cast<size_t>(T));
    for (int t = 0; t < T; ++t) {
        double s = 0.0;
        for (int tau = 0; tau < T; ++tau) {
            s += matrix.at(t, tau) * dev[static_cast<size_t>(tau)];
        }
        double d = baseline_kw[static_cast<size_t>(t)] * (1.0 + s);
        if (d < config.floor_demand_kw) {
            d = config.floor_demand_kw;
            ++out.clamped_hours;
        }
        out.demand_adr_kw[static_cast<size_t>(t)] = d;
        out.delta_kw[static_cast<size_t>(t)] = d - baseline_kw[static_cast<size_t>(t)];
    }
    for (int t = 0; t < T; ++t) {
        const double delta = out.delta_kw[static_cast<size_t>(t)];
        if (partition.is_peak(t)) {
            out.curtailed_peak_kwh -= delta;
        } else {
            out.shifted_off_kwh += delta;
        }
    }
    out.balance_residual_kwh = out.curtailed_peak_kwh - out.shifted_off_kwh;
    return out;
}

LambdaSolve solve_lambda(const std::vector<double>& baseline_kw,
                         const ClassPrice& class_price, const ElasticityMatrix& matrix,
                         const PeriodPartition& partition) {
    check_dimensions(baseline_kw, class_price, matrix, partition);
    double total_energy = 0.0;
    for (double d : baseline_kw) total_energy += d;
    const double tol = 1e-8 * total_energy;

    auto psi = [&](double lambda) {
        return residual_unclamped(baseline_kw, class_price, matrix, partition, lambda);
    };

    LambdaSolve result;
    bool all_zero = true;
    for (double e : matrix.entries) {
        if (e != 0.0) {
            all_zero = false;
            break;
        }
    }
    if (all_zero) {
        result.constraint_unreachable = true;  // nothing responds to lambda
        return result;
    }

    const double psi0 = psi(0.0);
    result.residual_kwh = psi0;
    if (std::abs(psi0) <= tol) return result;

    const double slope = psi(1.0) - psi0;
    if (std::abs(slope) < 1e-14 * std::max(1.0, std::abs(psi0))) {
        result.constraint_unreachable = true;  // residual insensitive to lambda
        return result;
    }

    const double nominal = class_price.class_nominal_cents;
    double a = -nominal, b = nominal;
    double fa = psi(a), fb = psi(b);
    for (int grow = 0; grow < 80 && fa * fb > 0.0; ++grow) {
        a *= 2.0;
        b *= 2.0;
        fa = psi(a);
        fb = psi(b);
    }
    if (fa * fb > 0.0) {
        result.constraint_unreachable = true;
        return result;
    }

    double mid = 0.0, fm = psi0;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (a + b);
        fm = psi(mid);
        if (std::abs(fm) <= tol) break;
        if ((fa < 0.0) == (fm < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }

    // The residual is affine, so when the slope is well conditioned the
    // closed-form root is at least as accurate as the bisection estimate.
    const double closed = -psi0 / slope;
    if (std::isfinite(closed) && std::abs(psi(closed)) <= std::abs(fm)) {
        mid = closed;
        fm = psi(closed);
    }
    result.lambda = mid;
    result.residual_kwh = fm;
    return result;
}

double benefit(const BenefitParams& params, const std::vector<double>& demand_kw) {
    const size_t T = params.baseline_kw.size();
    if (demand_kw.size() != T || params.self_elasticity_diag.size() != T) {
        throw ValidationError("benefit: dimension mismatch");
    }
    double total = params.benefit_at_baseline;
    for (size_t t = 0; t < T; ++t) {
        const double d0 = params.baseline_kw[t];
        if (!(d0 > 0.0)) throw ValidationError("benefit: baseline must be positive");
        const double dd = demand_kw[t] - d0;
        if (dd == 0.0) continue;
        const double eps = params.self_elasticity_diag[t];
        if (eps == 0.0) {
            std::ostringstream os;
            os << "benefit: curvature undefined at hour " << t
               << " (zero elasticity, demand off baseline)";
            throw ValidationError(os.str());
        }
        total += (params.nominal_price_cents + params.lambda) * dd +
                 params.nominal_price_cents / (eps * d0) * dd * dd * 0.5;
    }
    return total;
}

double net_benefit(const BenefitParams& params, const std::vector<double>& demand_kw,
                   const ClassPrice& class_price) {
    if (class_price.class_price_cents.size() != demand_kw.size()) {
        throw ValidationError("net_benefit: dimension mismatch");
    }
    double payment = 0.0;
    for (size_t t = 0; t < demand_kw.size(); ++t) {
        payment += demand_kw[t] * class_price.class_price_cents[t];
    }
    return benefit(params, demand_kw) - payment;
}

double aggregate_balance(const std::vector<DrOutcome>& outcomes) {
    double total = 0.0;
    for (const DrOutcome& o : outcomes) {
        for (double d : o.delta_kw) total += d;
    }
    return total;
}

}  // namespace dresp
