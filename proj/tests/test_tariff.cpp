#include "doctest.h"

#include <cmath>

#include "dresp/rng.hpp"
#include "dresp/tariff.hpp"

using namespace dresp;

namespace {

PriceSignal flat_signal(double price, int T = 24, double nominal = 5.0) {
    PriceSignal s;
    s.horizon_hours = T;
    s.utility_price_cents.assign(static_cast<size_t>(T), price);
    s.nominal_price_cents = nominal;
    return s;
}

PeriodConfig paper_config() {
    PeriodConfig cfg;
    cfg.horizon_hours = 24;
    cfg.peak = {{8, 11}, {18, 22}};
    cfg.valley = {{12, 18}};
    cfg.off_peak = {{0, 8}, {23, 24}};
    return cfg;
}

}  // namespace

TEST_CASE("class price scaling") {
    const ClassPrice discounted = build_class_price(flat_signal(10.0), -0.2);
    for (double p : discounted.class_price_cents) CHECK(p == doctest::Approx(8.0));
    CHECK(discounted.class_nominal_cents == doctest::Approx(4.0));

    const ClassPrice identity = build_class_price(flat_signal(10.0), 0.0);
    for (double p : identity.class_price_cents) CHECK(p == 10.0);

    CHECK_THROWS_AS(build_class_price(flat_signal(10.0), -1.0), ValidationError);
    CHECK_THROWS_AS(build_class_price(flat_signal(10.0), -1.5), ValidationError);
}

TEST_CASE("five class coefficients produce five distinct signals") {
    const PriceSignal s = flat_signal(10.0);
    const double kappas[] = {-0.2, 1.0, 0.0, 0.2, -0.5};
    std::vector<double> first;
    for (double k : kappas) {
        const ClassPrice cp = build_class_price(s, k);
        CHECK(cp.class_price_cents[0] == doctest::Approx(10.0 * (1.0 + k)));
        first.push_back(cp.class_price_cents[0]);
    }
    std::sort(first.begin(), first.end());
    CHECK(std::adjacent_find(first.begin(), first.end()) == first.end());
}

TEST_CASE("class price homogeneity in the utility price") {
    RngStream rng(11);
    PriceSignal s = flat_signal(1.0);
    for (double& p : s.utility_price_cents) p = rng.uniform(2.0, 12.0);
    const double c = 3.7;
    PriceSignal scaled = s;
    for (double& p : scaled.utility_price_cents) p *= c;
    scaled.nominal_price_cents *= c;
    const ClassPrice a = build_class_price(s, 0.35);
    const ClassPrice b = build_class_price(scaled, 0.35);
    for (size_t t = 0; t < a.class_price_cents.size(); ++t) {
        CHECK(b.class_price_cents[t] ==
              doctest::Approx(c * a.class_price_cents[t]).epsilon(1e-14));
    }
}

TEST_CASE("paper period partition assigns the two uncovered hours to peak") {
    const PeriodPartition part = classify_hours(paper_config());
    CHECK(part.at(10) == Period::peak);
    CHECK(part.at(11) == Period::peak);  // gap hour, preceding hour is peak
    CHECK(part.at(21) == Period::peak);
    CHECK(part.at(22) == Period::peak);  // gap hour
    CHECK(part.at(12) == Period::valley);
    CHECK(part.at(23) == Period::off_peak);
    CHECK(part.hours(Period::peak).size() == 9);
    CHECK(part.hours(Period::valley).size() == 6);
    CHECK(part.hours(Period::off_peak).size() == 9);

    // every hour in exactly one period
    int covered = 0;
    for (Period p : {Period::peak, Period::valley, Period::off_peak}) {
        covered += static_cast<int>(part.hours(p).size());
    }
    CHECK(covered == 24);
}

TEST_CASE("degenerate period configs") {
    PeriodConfig empty;
    empty.horizon_hours = 24;
    CHECK_THROWS_AS(classify_hours(empty), ValidationError);

    PeriodConfig all_peak;
    all_peak.horizon_hours = 24;
    all_peak.peak = {{0, 24}};
    const PeriodPartition part = classify_hours(all_peak);
    CHECK(part.hours(Period::peak).size() == 24);
    CHECK(part.hours(Period::valley).empty());
    CHECK(part.hours(Period::off_peak).empty());
}

TEST_CASE("overlapping intervals are rejected naming the hours") {
    PeriodConfig cfg;
    cfg.horizon_hours = 24;
    cfg.peak = {{8, 12}};
    cfg.valley = {{11, 14}};
    try {
        classify_hours(cfg);
        FAIL("expected overlap rejection");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("11") != std::string::npos);
    }
}

TEST_CASE("partition json round-trip") {
    const PeriodPartition part = classify_hours(paper_config());
    const PeriodPartition again = partition_from_json(partition_to_json(part));
    CHECK(again.horizon_hours == part.horizon_hours);
    for (Period p : {Period::peak, Period::valley, Period::off_peak}) {
        CHECK(again.hours(p) == part.hours(p));
    }
}
