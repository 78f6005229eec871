#include "doctest.h"

#include <cmath>
#include <numeric>

#include "dresp/customers.hpp"

using namespace dresp;

namespace {

CustomerClass test_class(double cov = 0.1, int T = 24) {
    CustomerClass cls;
    cls.name = "A";
    cls.kappa = -0.5;
    cls.self_elasticity = -0.23;
    cls.min_demand_kw = 8.0;
    cls.max_demand_kw = 18.0;
    cls.lf_mean.resize(static_cast<size_t>(T));
    for (int t = 0; t < T; ++t) {
        cls.lf_mean[static_cast<size_t>(t)] = 0.4 + 0.5 * std::abs(std::sin(0.3 * t));
    }
    cls.lf_cov.assign(static_cast<size_t>(T), cov);
    return cls;
}

}  // namespace

TEST_CASE("load factor bounds") {
    CustomerClass cls = test_class();
    cls.lf_mean[0] = 0.8;
    cls.lf_cov[0] = 0.1;
    const LfBounds b = lf_bounds(cls, 0);
    CHECK(b.sd == doctest::Approx(0.08).epsilon(1e-15));
    CHECK(b.lower == doctest::Approx(0.72).epsilon(1e-15));
    CHECK(b.upper == doctest::Approx(0.88).epsilon(1e-15));

    cls.lf_cov[1] = 0.0;
    const LfBounds degenerate = lf_bounds(cls, 1);
    CHECK(degenerate.lower == degenerate.upper);
    CHECK(degenerate.lower == cls.lf_mean[1]);

    cls.lf_mean[2] = 0.5;
    cls.lf_cov[2] = 0.2;
    const LfBounds wide = lf_bounds(cls, 2);
    CHECK(wide.lower == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(wide.upper == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("degenerate bounds return the mean") {
    RngStream rng(5);
    const LfBounds b{0.5, 0.5, 0.5, 0.0};
    CHECK(sample_load_factor(b, rng) == 0.5);
}

TEST_CASE("draws respect the truncation interval") {
    RngStream rng(17);
    const LfBounds b{0.51, 0.69, 0.6, 0.09};  // mean 0.6, cov 0.15
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double lf = sample_load_factor(b, rng);
        lo = std::min(lo, lf);
        hi = std::max(hi, lf);
    }
    CHECK(lo >= 0.51);
    CHECK(hi <= 0.69);
}

TEST_CASE("symmetric truncation keeps the mean") {
    RngStream rng(23);
    const LfBounds b{0.72, 0.88, 0.8, 0.08};
    const int n = 20000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += sample_load_factor(b, rng);
    const double mean = sum / n;
    // truncation at +-1 sd: sd of the truncated draw is ~0.5396 sigma
    const double se = 0.08 * 0.5396 / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(mean - 0.8) <= 3.0 * se);
}

TEST_CASE("zero cov synthesis is exact") {
    const CustomerClass cls = test_class(0.0);
    RngStream rng(3);
    const Customer c = synthesize_customer(cls, 4, 10.0, rng, 1);
    for (size_t t = 0; t < c.baseline_kw.size(); ++t) {
        CHECK(c.baseline_kw[t] == cls.lf_mean[t] * 10.0);
        CHECK(c.sampled_lf[t] == cls.lf_mean[t]);
    }
}

TEST_CASE("baseline is the sampled load factor times rated demand") {
    const CustomerClass cls = test_class();
    RngStream rng(9);
    const Customer c = synthesize_customer(cls, 4, 12.0, rng, 7);
    double expected_sum = 0.0;
    for (size_t t = 0; t < c.baseline_kw.size(); ++t) {
        CHECK(c.baseline_kw[t] == c.sampled_lf[t] * 12.0);
        CHECK(c.baseline_kw[t] > 0.0);
        const LfBounds b = lf_bounds(cls, static_cast<int>(t));
        CHECK(c.sampled_lf[t] >= b.lower);
        CHECK(c.sampled_lf[t] <= b.upper);
        expected_sum += c.sampled_lf[t] * 12.0;
    }
    const double total = std::accumulate(c.baseline_kw.begin(), c.baseline_kw.end(), 0.0);
    CHECK(total == doctest::Approx(expected_sum).epsilon(1e-15));
}

TEST_CASE("rated demand outside the class range is rejected") {
    const CustomerClass cls = test_class();
    RngStream rng(1);
    CHECK_THROWS_AS(synthesize_customer(cls, 4, 30.0, rng), ValidationError);
    CHECK_THROWS_AS(synthesize_customer(cls, 4, 1.0, rng), ValidationError);
}

TEST_CASE("seed determinism for synthesis") {
    const CustomerClass cls = test_class();
    RngStream a(77), b(77);
    const Customer ca = synthesize_customer(cls, 4, 12.0, a, 1);
    const Customer cb = synthesize_customer(cls, 4, 12.0, b, 1);
    CHECK(ca.baseline_kw == cb.baseline_kw);
    CHECK(ca.sampled_lf == cb.sampled_lf);
}

TEST_CASE("bus demand split at the unique feasible point") {
    RngStream rng(2);
    const auto rated = split_bus_demand(100.0, 2, 50.0, 100.0, rng, 1, "T");
    REQUIRE(rated.size() == 2);
    CHECK(rated[0] == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(rated[1] == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("bus demand split respects range and target") {
    RngStream rng(4);
    const auto rated = split_bus_demand(30.0, 2, 8.0, 18.0, rng, 1, "T");
    REQUIRE(rated.size() == 2);
    for (double r : rated) {
        CHECK(r >= 12.0);  // the partner cannot exceed 18
        CHECK(r <= 18.0);
    }
    CHECK(rated[0] + rated[1] == doctest::Approx(30.0).epsilon(1e-12));
}

TEST_CASE("infeasible allocations are rejected naming the bus") {
    RngStream rng(6);
    CHECK_THROWS_WITH_AS(split_bus_demand(300.0, 2, 50.0, 100.0, rng, 42, "T"),
                         doctest::Contains("bus 42"), ValidationError);
    CHECK_THROWS_AS(split_bus_demand(40.0, 2, 50.0, 100.0, rng, 1, "T"), ValidationError);

    // count x max below the bus demand
    CHECK_THROWS_WITH_AS(
        apportion_customer_counts(2, {{7, 500.0}}, 50.0, 100.0, "T"),
        doctest::Contains("bus 7"), ValidationError);
}

TEST_CASE("population counts and totals follow the allocation") {
    PopulationConfig config;
    ClassSpec spec;
    spec.cls = test_class();
    spec.customer_count = 10;
    spec.buses = {{1, 60.0}, {2, 70.0}};
    config.classes.push_back(spec);

    RngStream rng(123);
    const auto population = build_population(config, rng);
    CHECK(population.size() == 10);
    double bus1 = 0.0, bus2 = 0.0;
    for (const Customer& c : population) {
        CHECK(c.rated_kw >= 8.0);
        CHECK(c.rated_kw <= 18.0);
        (c.bus == 1 ? bus1 : bus2) += c.rated_kw;
    }
    CHECK(bus1 == doctest::Approx(60.0).epsilon(1e-9));
    CHECK(bus2 == doctest::Approx(70.0).epsilon(1e-9));
    for (size_t i = 0; i < population.size(); ++i) {
        CHECK(population[i].id == static_cast<int>(i) + 1);
    }
}

TEST_CASE("zero-cov class aggregates to the pattern times total demand") {
    PopulationConfig config;
    ClassSpec spec;
    spec.cls = test_class(0.0);
    spec.customer_count = 8;
    spec.buses = {{1, 100.0}};
    config.classes.push_back(spec);
    RngStream rng(55);
    const auto population = build_population(config, rng);
    double total_rated = 0.0;
    for (const Customer& c : population) total_rated += c.rated_kw;
    for (size_t t = 0; t < spec.cls.lf_mean.size(); ++t) {
        double agg = 0.0;
        for (const Customer& c : population) agg += c.baseline_kw[t];
        CHECK(agg == doctest::Approx(spec.cls.lf_mean[t] * total_rated).epsilon(1e-12));
    }
}
