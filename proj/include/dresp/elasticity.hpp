#pragma once

#include <string>
#include <vector>

#include "dresp/customers.hpp"
#include "dresp/rng.hpp"
#include "dresp/tariff.hpp"

namespace dresp {

enum class PemModel { pem, dpem, spem };

const char* model_name(PemModel m);

// T x T elasticity matrix, row t = responding hour, column tau = hour
// whose price deviation drives the response. Diagonal <= 0, off-diagonal
// >= 0.
struct ElasticityMatrix {
    int horizon_hours = 0;
    PemModel model = PemModel::pem;
    std::vector<double> entries;  // row-major, size T*T

    double at(int t, int tau) const {
        return entries[static_cast<size_t>(t) * static_cast<size_t>(horizon_hours) +
                       static_cast<size_t>(tau)];
    }
    double& at(int t, int tau) {
        return entries[static_cast<size_t>(t) * static_cast<size_t>(horizon_hours) +
                       static_cast<size_t>(tau)];
    }
};

ElasticityMatrix zero_matrix(int horizon_hours, PemModel model);
ElasticityMatrix diagonal_matrix(const std::vector<double>& diag, PemModel model);

// Static benchmark: constant self-elasticity on the diagonal, a fixed
// cross coupling between peak and non-peak hours, zero elsewhere.
ElasticityMatrix build_pem_matrix(double class_self, const PeriodPartition& partition,
                                  double cross_fraction);

enum class PeakMode { max_demand, peak_price };

struct PeakSpec {
    PeakMode mode = PeakMode::max_demand;
    double alpha = 0.0;            // curtailable fraction, peak_price mode
    double peak_elasticity = 0.0;  // elasticity at the peak hour, max_demand mode
};

// Dynamic elasticity vector: the product elasticity(t) * baseline(t) is
// held constant at its peak-hour value, so the diagonal scales inversely
// with demand. Ties in the peak argmax resolve to the lowest hour.
std::vector<double> build_dpem_diagonal(const Customer& customer,
                                        const ClassPrice& class_price,
                                        const PeakSpec& spec);

struct GbmParams {
    double mu = 0.0;                 // drift per hour
    double sigma = 0.0;              // volatility per sqrt(hour)
    double epsilon0_fraction = 0.15; // initial cross value as fraction of |self|
    int recovery_window = 4;         // how many hours after a peak can absorb load
    uint64_t seed = 0;
    bool allow_growth = false;       // mu > sigma^2/2 is rejected unless set

    void validate() const;
};

// Geometric Brownian motion path: value[0] = start, each step multiplies
// by exp((mu - sigma^2/2) dt + sigma sqrt(dt) z) with dt = 1 h.
std::vector<double> sample_gbm_path(const GbmParams& params, double start, int steps,
                                    RngStream& rng);

// Stochastic matrix: self-elasticity on peak hours only; each peak column
// spreads recovery over the following `recovery_window` non-peak hours
// (cyclic) along a GBM path started at epsilon0_fraction * |self|. Column
// recovery is capped so the demand-weighted recovery never exceeds the
// column's curtailment weight.
ElasticityMatrix build_spem_matrix(const Customer& customer, double class_self,
                                   const PeriodPartition& partition,
                                   const GbmParams& params, RngStream& rng);

void write_matrix_csv(const ElasticityMatrix& matrix, const std::string& path);

}  // namespace dresp
