#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace dresp {

// Thrown for configuration / fixture / input problems (CLI exits with 1).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Period { peak, valley, off_peak };

const char* period_name(Period p);

// Hourly utility price signal plus the flat nominal reference price.
struct PriceSignal {
    int horizon_hours = 24;
    std::vector<double> utility_price_cents;  // one entry per hour, > 0
    double nominal_price_cents = 5.0;         // flat reference, > 0

    void validate() const;  // throws ValidationError
};

// Prices seen by one customer class: utility price scaled by (1 + kappa).
struct ClassPrice {
    double kappa = 0.0;
    std::vector<double> class_price_cents;
    double class_nominal_cents = 0.0;
};

ClassPrice build_class_price(const PriceSignal& signal, double kappa);

// Half-open hour interval [begin, end).
struct HourInterval {
    int begin = 0;
    int end = 0;
};

struct PeriodConfig {
    int horizon_hours = 24;
    std::vector<HourInterval> peak;
    std::vector<HourInterval> valley;
    std::vector<HourInterval> off_peak;
};

// Complete, disjoint assignment of every hour to a period.
struct PeriodPartition {
    int horizon_hours = 0;
    std::vector<Period> assignment;  // size horizon_hours

    Period at(int hour) const { return assignment.at(static_cast<size_t>(hour)); }
    bool is_peak(int hour) const { return at(hour) == Period::peak; }
    std::vector<int> hours(Period p) const;
};

// Assigns configured intervals, rejects overlaps (naming the clashing
// hours) and attaches any uncovered hour to the period of the preceding
// hour, wrapping over midnight.
PeriodPartition classify_hours(const PeriodConfig& config);

PeriodConfig period_config_from_json(const nlohmann::json& j, int horizon_hours);
nlohmann::json partition_to_json(const PeriodPartition& partition);
PeriodPartition partition_from_json(const nlohmann::json& j);

}  // namespace dresp
