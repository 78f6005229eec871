#pragma once

#include <vector>

#include "dresp/elasticity.hpp"
#include "dresp/tariff.hpp"

namespace dresp {

enum class LambdaMode { zero, balance_solve };

struct DrConfig {
    LambdaMode lambda_mode = LambdaMode::zero;
    double lambda_value = 0.0;    // solved value when mode is balance_solve
    double floor_demand_kw = 0.0; // lower clamp on post-DR demand
};

struct DrOutcome {
    std::vector<double> demand_adr_kw;
    std::vector<double> delta_kw;  // demand_adr - baseline
    double lambda_used = 0.0;
    double balance_residual_kwh = 0.0; // peak curtailment minus off-peak/valley shift
    double curtailed_peak_kwh = 0.0;
    double shifted_off_kwh = 0.0;
    int clamped_hours = 0;
};

// Post-DR demand: D(t) = D0(t) * (1 + sum_tau eps(t,tau) *
// (price(tau) - nominal + lambda) / nominal), clamped at the floor.
DrOutcome respond(const std::vector<double>& baseline_kw, const ClassPrice& class_price,
                  const ElasticityMatrix& matrix, const PeriodPartition& partition,
                  const DrConfig& config);

struct LambdaSolve {
    double lambda = 0.0;
    double residual_kwh = 0.0;
    bool constraint_unreachable = false;  // zero lambda sensitivity, caller uses 0
};

// Finds the multiplier that zeroes the balance residual, by bracketing
// bisection grown geometrically from [-nominal, +nominal]; the residual is
// affine in lambda, so the closed-form root is used to polish when the
// slope is well conditioned. Residual target: 1e-8 x baseline energy.
LambdaSolve solve_lambda(const std::vector<double>& baseline_kw,
                         const ClassPrice& class_price, const ElasticityMatrix& matrix,
                         const PeriodPartition& partition);

struct BenefitParams {
    std::vector<double> baseline_kw;
    double nominal_price_cents = 0.0;
    double lambda = 0.0;
    std::vector<double> self_elasticity_diag;
    double benefit_at_baseline = 0.0;  // additive constant
};

// Quadratic benefit around the baseline: per hour
// (nominal + lambda)*(D - D0) + nominal/(eps*D0) * (D - D0)^2 / 2.
double benefit(const BenefitParams& params, const std::vector<double>& demand_kw);

double net_benefit(const BenefitParams& params, const std::vector<double>& demand_kw,
                   const ClassPrice& class_price);

// Sum of all demand deltas; ~0 for lossless DR, negative for lossy DR.
double aggregate_balance(const std::vector<DrOutcome>& outcomes);

}  // namespace dresp
