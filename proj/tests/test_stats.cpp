#include "doctest.h"

#include <cmath>

#include "dresp/stats.hpp"

#include "oracles.hpp"

using namespace dresp;

TEST_CASE("normal quantile inverts the erf-based cdf") {
    for (double z = -8.0; z <= 8.0; z += 0.05) {
        const double p = oracle::Phi(z);
        if (p <= 0.0 || p >= 1.0) continue;
        CHECK(std::abs(normal_quantile(p) - z) <= 1e-9 * std::max(1.0, std::abs(z)));
    }
}

TEST_CASE("normal quantile known values and symmetry") {
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(normal_quantile(0.01) == doctest::Approx(-2.326347874040841).epsilon(1e-12));
    for (double p : {1e-12, 1e-6, 0.2, 0.4}) {
        CHECK(normal_quantile(p) == doctest::Approx(-normal_quantile(1.0 - p)).epsilon(1e-12));
    }
    CHECK_THROWS(normal_quantile(0.0));
    CHECK_THROWS(normal_quantile(1.0));
}

TEST_CASE("normal pdf/cdf basics") {
    CHECK(normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-12));
}
