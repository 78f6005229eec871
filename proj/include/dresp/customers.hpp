#pragma once

#include <string>
#include <vector>

#include "dresp/rng.hpp"
#include "dresp/tariff.hpp"

namespace dresp {

// One customer class: tariff coefficient, self-elasticity, feasible
// per-customer demand range and the hourly load-factor pattern the
// profiles are diversified around.
struct CustomerClass {
    std::string name;
    double kappa = 0.0;
    double self_elasticity = 0.0;  // <= 0
    double min_demand_kw = 0.0;
    double max_demand_kw = 0.0;
    std::vector<double> lf_mean;  // per hour, in (0,1]
    std::vector<double> lf_cov;   // per hour, in [0,1)

    void validate(int horizon_hours) const;
};

// Truncation interval for one hour's load factor draw.
struct LfBounds {
    double lower = 0.0;
    double upper = 0.0;
    double mean = 0.0;
    double sd = 0.0;
};

struct Customer {
    int id = 0;
    std::string class_name;
    int bus = 0;
    double rated_kw = 0.0;
    std::vector<double> sampled_lf;
    std::vector<double> baseline_kw;  // sampled_lf * rated_kw
};

LfBounds lf_bounds(const CustomerClass& cls, int hour);

// Truncated-normal draw: inverse-CDF sampling repeated until the value
// falls inside [lower, upper]. Capped at 10000 attempts.
double sample_load_factor(const LfBounds& bounds, RngStream& rng);

Customer synthesize_customer(const CustomerClass& cls, int bus, double rated_kw,
                             RngStream& rng, int id = 0);

struct BusAllocation {
    int bus = 0;
    double demand_kw = 0.0;
};

struct ClassSpec {
    CustomerClass cls;
    int customer_count = 0;
    std::vector<BusAllocation> buses;
};

struct PopulationConfig {
    std::vector<ClassSpec> classes;
    double bus_tolerance = 1e-3;  // relative tolerance on per-bus demand totals
};

// Deterministic apportionment of a class's customer count across its
// buses: proportional to bus demand (largest remainder), then adjusted
// into the per-bus feasible count range. Throws naming the offending bus
// when no feasible apportionment exists.
std::vector<int> apportion_customer_counts(int total_count,
                                           const std::vector<BusAllocation>& buses,
                                           double min_kw, double max_kw,
                                           const std::string& class_name);

// Splits a bus demand total into `count` rated demands inside
// [min_kw, max_kw]: uniform draws rescaled toward the target with
// out-of-range values clamped and the remainder redistributed until the
// total matches the target.
std::vector<double> split_bus_demand(double target_kw, int count, double min_kw,
                                     double max_kw, RngStream& rng, int bus,
                                     const std::string& class_name);

std::vector<Customer> build_population(const PopulationConfig& config, RngStream& rng);

}  // namespace dresp
