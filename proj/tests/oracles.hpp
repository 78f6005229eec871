#pragma once

// Test-only oracles, kept independent of the library implementation paths
// they check.

#include <cmath>
#include <functional>
#include <vector>

#include "dresp/tariff.hpp"

namespace oracle {

inline double phi(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * 3.14159265358979323846);
}

inline double Phi(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

struct TruncStats {
    double mean = 0.0;
    double sd = 0.0;
};

// Moments of a normal(mu, sigma^2) truncated to [a, b], from the
// closed-form expressions.
inline TruncStats truncated_normal(double mu, double sigma, double a, double b) {
    if (sigma == 0.0) return TruncStats{mu, 0.0};
    const double alpha = (a - mu) / sigma;
    const double beta = (b - mu) / sigma;
    const double z = Phi(beta) - Phi(alpha);
    const double mean = mu + sigma * (phi(alpha) - phi(beta)) / z;
    const double var =
        sigma * sigma *
        (1.0 + (alpha * phi(alpha) - beta * phi(beta)) / z -
         std::pow((phi(alpha) - phi(beta)) / z, 2));
    return TruncStats{mean, std::sqrt(var)};
}

// Demand-change sum written directly from the multi-period demand
// expression, by plain loops.
inline double balance_sum(const std::vector<double>& baseline,
                          const std::vector<double>& price, double nominal,
                          const std::vector<std::vector<double>>& eps, double lambda) {
    double total = 0.0;
    const size_t T = baseline.size();
    for (size_t t = 0; t < T; ++t) {
        double s = 0.0;
        for (size_t tau = 0; tau < T; ++tau) {
            s += eps[t][tau] * (price[tau] - nominal + lambda) / nominal;
        }
        total += baseline[t] * s;
    }
    return total;
}

// Brute-force multiplier search: coarse scan over [lo, hi], then a fine
// scan at `step` inside the best coarse cell. Returns the argmin of the
// absolute residual.
inline double grid_scan_lambda(const std::function<double(double)>& psi, double lo,
                               double hi, double coarse, double step) {
    double best = lo;
    double best_abs = std::abs(psi(lo));
    for (double x = lo; x <= hi; x += coarse) {
        const double v = std::abs(psi(x));
        if (v < best_abs) {
            best_abs = v;
            best = x;
        }
    }
    double fine_best = best;
    for (double x = best - coarse; x <= best + coarse; x += step) {
        const double v = std::abs(psi(x));
        if (v < best_abs) {
            best_abs = v;
            fine_best = x;
        }
    }
    return fine_best;
}

// Two-hour setting used throughout: hour 0 off-peak at 3 cents, hour 1
// peak at 8 cents, nominal 5 cents, baseline {2, 10} kW.
struct TwoState {
    dresp::PeriodPartition partition;
    dresp::ClassPrice price;
    std::vector<double> baseline{2.0, 10.0};

    TwoState() {
        partition.horizon_hours = 2;
        partition.assignment = {dresp::Period::off_peak, dresp::Period::peak};
        price.kappa = 0.0;
        price.class_price_cents = {3.0, 8.0};
        price.class_nominal_cents = 5.0;
    }
};

}  // namespace oracle
