#pragma once

#include <map>
#include <string>
#include <vector>

#include "dresp/customers.hpp"
#include "dresp/elasticity.hpp"
#include "dresp/engine.hpp"

namespace dresp {

enum class ExecMode { serial, parallel };

// Per-class inputs shared by every customer of the class.
struct ClassContext {
    CustomerClass cls;
    ClassPrice price;
};

struct ModelParams {
    double pem_cross_fraction = 0.15;
    PeakMode peak_mode = PeakMode::max_demand;
    double peak_alpha = 0.12;          // peak_price mode only
    bool peak_elasticity_override = false;
    double peak_elasticity = 0.0;      // used when override is set, else class self
    GbmParams gbm;                     // gbm.seed is the per-replication stream seed
    LambdaMode pem_lambda = LambdaMode::zero;
    LambdaMode dpem_lambda = LambdaMode::balance_solve;
    LambdaMode spem_lambda = LambdaMode::zero;
    double floor_demand_kw = 0.0;
};

// Builds the per-customer elasticity matrix for `model`, solves the
// balance multiplier where configured and evaluates the post-DR demand.
// Customers are independent: SPEM streams derive from
// (gbm.seed, customer id), so serial and parallel execution produce
// identical outcomes.
std::vector<DrOutcome> evaluate_model(PemModel model,
                                      const std::vector<Customer>& population,
                                      const std::map<std::string, ClassContext>& classes,
                                      const PeriodPartition& partition,
                                      const ModelParams& params, ExecMode exec);

// Matrix for one customer, as used by evaluate_model (exposed for the
// debug export and tests).
ElasticityMatrix build_model_matrix(PemModel model, const Customer& customer,
                                    const ClassContext& ctx,
                                    const PeriodPartition& partition,
                                    const ModelParams& params);

}  // namespace dresp
