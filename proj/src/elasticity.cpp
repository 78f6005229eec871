#include "dresp/elasticity.hpp"

#include <cmath>
#include <sstream>

#include "dresp/csvio.hpp"

namespace dresp {

const char* model_name(PemModel m) {
    switch (m) {
        case PemModel::pem: return "pem";
        case PemModel::dpem: return "dpem";
        case PemModel::spem: return "spem";
    }
    return "?";
}

ElasticityMatrix zero_matrix(int horizon_hours, PemModel model) {
    ElasticityMatrix m;
    m.horizon_hours = horizon_hours;
    m.model = model;
    m.entries.assign(static_cast<size_t>(horizon_hours) * static_cast<size_t>(horizon_hours),
                     0.0);
    return m;
}

ElasticityMatrix diagonal_matrix(const std::vector<double>& diag, PemModel model) {
    ElasticityMatrix m = zero_matrix(static_cast<int>(diag.size()), model);
    for (int t = 0; t < m.horizon_hours; ++t) m.at(t, t) = diag[static_cast<size_t>(t)];
    return m;
}

ElasticityMatrix build_pem_matrix(double class_self, const PeriodPartition& partition,
                                  double cross_fraction) {
    if (class_self > 0.0) {
        throw ValidationError("pem matrix: self-elasticity must be <= 0");
    }
    if (cross_fraction < 0.0) {
        throw ValidationError("pem matrix: cross fraction must be >= 0");
    }
    const int T = partition.horizon_hours;
    ElasticityMatrix m = zero_matrix(T, PemModel::pem);
    const double cross = cross_fraction * -class_self;
    for (int t = 0; t < T; ++t) {
        m.at(t, t) = class_self;
        for (int tau = 0; tau < T; ++tau) {
            if (tau == t) continue;
            if (partition.is_peak(t) != partition.is_peak(tau)) m.at(t, tau) = cross;
        }
    }
    return m;
}

static int argmax_lowest(const std::vector<double>& v) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i) {
        if (v[static_cast<size_t>(i)] > v[static_cast<size_t>(best)]) best = i;
    }
    return best;
}

std::vector<double> build_dpem_diagonal(const Customer& customer,
                                        const ClassPrice& class_price,
                                        const PeakSpec& spec) {
    const std::vector<double>& baseline = customer.baseline_kw;
    const int T = static_cast<int>(baseline.size());
    for (double d : baseline) {
        if (!(d > 0.0)) {
            throw ValidationError("dpem diagonal: baseline must be strictly positive");
        }
    }

    int t_peak = 0;
    double eps_peak = 0.0;
    if (spec.mode == PeakMode::max_demand) {
        if (spec.peak_elasticity > 0.0) {
            throw ValidationError("dpem diagonal: peak elasticity must be <= 0");
        }
        t_peak = argmax_lowest(baseline);
        eps_peak = spec.peak_elasticity;
    } else {
        if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) {
            throw ValidationError("dpem diagonal: alpha must lie in (0,1)");
        }
        if (static_cast<int>(class_price.class_price_cents.size()) != T) {
            throw ValidationError("dpem diagonal: price horizon mismatch");
        }
        t_peak = argmax_lowest(class_price.class_price_cents);
        const double deviation =
            class_price.class_price_cents[static_cast<size_t>(t_peak)] -
            class_price.class_nominal_cents;
        if (!(deviation > 0.0)) {
            throw ValidationError(
                "dpem diagonal: peak price must exceed the nominal price");
        }
        eps_peak = -(spec.alpha * class_price.class_nominal_cents) / deviation;
    }

    const double peak_product = eps_peak * baseline[static_cast<size_t>(t_peak)];
    std::vector<double> diag(static_cast<size_t>(T));
    for (int t = 0; t < T; ++t) {
        diag[static_cast<size_t>(t)] = peak_product / baseline[static_cast<size_t>(t)];
    }
    diag[static_cast<size_t>(t_peak)] = eps_peak;
    return diag;
}

void GbmParams::validate() const {
    if (sigma < 0.0) throw ValidationError("gbm: sigma must be >= 0");
    if (!(epsilon0_fraction > 0.0 && epsilon0_fraction <= 1.0)) {
        throw ValidationError("gbm: epsilon0_fraction must lie in (0,1]");
    }
    if (recovery_window < 1) throw ValidationError("gbm: recovery window must be >= 1");
    if (!allow_growth && mu > 0.5 * sigma * sigma) {
        std::ostringstream os;
        os << "gbm: growth regime (mu=" << mu << " > sigma^2/2=" << 0.5 * sigma * sigma
           << ") is not supported";
        throw ValidationError(os.str());
    }
}

std::vector<double> sample_gbm_path(const GbmParams& params, double start, int steps,
                                    RngStream& rng) {
    params.validate();
    if (steps < 1) throw ValidationError("gbm: steps must be >= 1");
    if (!(start > 0.0)) throw ValidationError("gbm: start value must be > 0");
    std::vector<double> path(static_cast<size_t>(steps));
    const double drift = params.mu - 0.5 * params.sigma * params.sigma;  // dt = 1 h
    path[0] = start;
    for (int k = 1; k < steps; ++k) {
        const double z = params.sigma > 0.0 ? rng.gaussian() : 0.0;
        path[static_cast<size_t>(k)] =
            path[static_cast<size_t>(k - 1)] * std::exp(drift + params.sigma * z);
    }
    return path;
}

ElasticityMatrix build_spem_matrix(const Customer& customer, double class_self,
                                   const PeriodPartition& partition,
                                   const GbmParams& params, RngStream& rng) {
    params.validate();
    if (class_self > 0.0) {
        throw ValidationError("spem matrix: self-elasticity must be <= 0");
    }
    const int T = partition.horizon_hours;
    if (static_cast<int>(customer.baseline_kw.size()) != T) {
        throw ValidationError("spem matrix: baseline horizon mismatch");
    }
    if (params.recovery_window >= T) {
        throw ValidationError("spem matrix: recovery window must be < horizon");
    }
    ElasticityMatrix m = zero_matrix(T, PemModel::spem);
    if (class_self == 0.0) return m;

    const double eps0 = params.epsilon0_fraction * -class_self;
    const std::vector<int> peaks = partition.hours(Period::peak);
    for (int tau : peaks) m.at(tau, tau) = class_self;

    for (int tau : peaks) {
        const std::vector<double> path =
            sample_gbm_path(params, eps0, params.recovery_window, rng);
        // path[d-1] lands at cyclic distance d from the peak hour.
        double recovery_weight = 0.0;
        for (int d = 1; d <= params.recovery_window; ++d) {
            const int t = (tau + d) % T;
            if (partition.is_peak(t)) continue;
            m.at(t, tau) = path[static_cast<size_t>(d - 1)];
            recovery_weight +=
                customer.baseline_kw[static_cast<size_t>(t)] * m.at(t, tau);
        }
        // Intertemporal bound: the demand-weighted recovery of a column may
        // not exceed what its peak hour curtails.
        const double budget = -class_self * customer.baseline_kw[static_cast<size_t>(tau)];
        if (recovery_weight > budget && recovery_weight > 0.0) {
            const double scale = budget / recovery_weight;
            for (int d = 1; d <= params.recovery_window; ++d) {
                const int t = (tau + d) % T;
                if (partition.is_peak(t)) continue;
                m.at(t, tau) *= scale;
            }
        }
    }
    return m;
}

void write_matrix_csv(const ElasticityMatrix& matrix, const std::string& path) {
    CsvWriter w(path);
    w.row({"t", "tau", "epsilon"});
    for (int t = 0; t < matrix.horizon_hours; ++t) {
        for (int tau = 0; tau < matrix.horizon_hours; ++tau) {
            w.row({std::to_string(t), std::to_string(tau),
                   format_double(matrix.at(t, tau))});
        }
    }
}

}  // namespace dresp
