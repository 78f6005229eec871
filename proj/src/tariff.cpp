#include "dresp/tariff.hpp"

#include <algorithm>
#include <sstream>

namespace dresp {

const char* period_name(Period p) {
    switch (p) {
        case Period::peak: return "peak";
        case Period::valley: return "valley";
        case Period::off_peak: return "off_peak";
    }
    return "?";
}

void PriceSignal::validate() const {
    if (horizon_hours <= 0) {
        throw ValidationError("price signal: horizon must be positive");
    }
    if (static_cast<int>(utility_price_cents.size()) != horizon_hours) {
        std::ostringstream os;
        os << "price signal: expected " << horizon_hours << " hourly prices, got "
           << utility_price_cents.size();
        throw ValidationError(os.str());
    }
    for (int t = 0; t < horizon_hours; ++t) {
        if (!(utility_price_cents[static_cast<size_t>(t)] > 0.0)) {
            std::ostringstream os;
            os << "price signal: price at hour " << t << " must be strictly positive";
            throw ValidationError(os.str());
        }
    }
    if (!(nominal_price_cents > 0.0)) {
        throw ValidationError("price signal: nominal price must be strictly positive");
    }
}

ClassPrice build_class_price(const PriceSignal& signal, double kappa) {
    signal.validate();
    if (!(1.0 + kappa > 0.0)) {
        throw ValidationError("class price: kappa <= -1 would produce non-positive prices");
    }
    ClassPrice cp;
    cp.kappa = kappa;
    cp.class_price_cents.resize(signal.utility_price_cents.size());
    const double factor = 1.0 + kappa;
    for (size_t t = 0; t < signal.utility_price_cents.size(); ++t) {
        cp.class_price_cents[t] = signal.utility_price_cents[t] * factor;
    }
    cp.class_nominal_cents = signal.nominal_price_cents * factor;
    return cp;
}

std::vector<int> PeriodPartition::hours(Period p) const {
    std::vector<int> out;
    for (int t = 0; t < horizon_hours; ++t) {
        if (assignment[static_cast<size_t>(t)] == p) out.push_back(t);
    }
    return out;
}

PeriodPartition classify_hours(const PeriodConfig& config) {
    const int T = config.horizon_hours;
    if (T <= 0) throw ValidationError("period config: horizon must be positive");

    constexpr int kUnassigned = -1;
    std::vector<int> owner(static_cast<size_t>(T), kUnassigned);
    std::vector<int> clashes;

    auto apply = [&](const std::vector<HourInterval>& intervals, Period p) {
        const int tag = static_cast<int>(p);
        for (const HourInterval& iv : intervals) {
            if (iv.begin < 0 || iv.end > T || iv.begin >= iv.end) {
                std::ostringstream os;
                os << "period config: interval [" << iv.begin << "," << iv.end
                   << ") is outside [0," << T << ")";
                throw ValidationError(os.str());
            }
            for (int t = iv.begin; t < iv.end; ++t) {
                int& slot = owner[static_cast<size_t>(t)];
                if (slot == kUnassigned || slot == tag) {
                    slot = tag;
                } else {
                    clashes.push_back(t);
                }
            }
        }
    };
    apply(config.peak, Period::peak);
    apply(config.valley, Period::valley);
    apply(config.off_peak, Period::off_peak);

    if (!clashes.empty()) {
        std::sort(clashes.begin(), clashes.end());
        clashes.erase(std::unique(clashes.begin(), clashes.end()), clashes.end());
        std::ostringstream os;
        os << "period config: overlapping intervals at hour(s)";
        for (int t : clashes) os << ' ' << t;
        throw ValidationError(os.str());
    }

    int first_assigned = kUnassigned;
    for (int t = 0; t < T; ++t) {
        if (owner[static_cast<size_t>(t)] != kUnassigned) {
            first_assigned = t;
            break;
        }
    }
    if (first_assigned == kUnassigned) {
        throw ValidationError("period config: no periods defined");
    }

    // Gap rule: an uncovered hour inherits the period of the preceding
    // hour, wrapping over midnight.
    for (int step = 1; step < T; ++step) {
        const int t = (first_assigned + step) % T;
        const int prev = (t + T - 1) % T;
        if (owner[static_cast<size_t>(t)] == kUnassigned) {
            owner[static_cast<size_t>(t)] = owner[static_cast<size_t>(prev)];
        }
    }

    PeriodPartition part;
    part.horizon_hours = T;
    part.assignment.resize(static_cast<size_t>(T));
    for (int t = 0; t < T; ++t) {
        part.assignment[static_cast<size_t>(t)] = static_cast<Period>(owner[static_cast<size_t>(t)]);
    }
    return part;
}

static std::vector<HourInterval> intervals_from_json(const nlohmann::json& j,
                                                     const std::string& key) {
    std::vector<HourInterval> out;
    if (!j.contains(key)) return out;
    for (const auto& pair : j.at(key)) {
        if (!pair.is_array() || pair.size() != 2) {
            throw ValidationError("period config: '" + key +
                                  "' entries must be [begin,end) pairs");
        }
        out.push_back(HourInterval{pair[0].get<int>(), pair[1].get<int>()});
    }
    return out;
}

PeriodConfig period_config_from_json(const nlohmann::json& j, int horizon_hours) {
    PeriodConfig cfg;
    cfg.horizon_hours = horizon_hours;
    cfg.peak = intervals_from_json(j, "peak");
    cfg.valley = intervals_from_json(j, "valley");
    cfg.off_peak = intervals_from_json(j, "off_peak");
    return cfg;
}

nlohmann::json partition_to_json(const PeriodPartition& partition) {
    nlohmann::json j;
    j["horizon_hours"] = partition.horizon_hours;
    j["peak"] = partition.hours(Period::peak);
    j["valley"] = partition.hours(Period::valley);
    j["off_peak"] = partition.hours(Period::off_peak);
    return j;
}

PeriodPartition partition_from_json(const nlohmann::json& j) {
    PeriodPartition part;
    part.horizon_hours = j.at("horizon_hours").get<int>();
    part.assignment.assign(static_cast<size_t>(part.horizon_hours), Period::off_peak);
    std::vector<bool> seen(static_cast<size_t>(part.horizon_hours), false);
    auto fill = [&](const char* key, Period p) {
        for (int t : j.at(key).get<std::vector<int>>()) {
            if (t < 0 || t >= part.horizon_hours || seen[static_cast<size_t>(t)]) {
                throw ValidationError("partition: hour out of range or duplicated");
            }
            seen[static_cast<size_t>(t)] = true;
            part.assignment[static_cast<size_t>(t)] = p;
        }
    };
    fill("peak", Period::peak);
    fill("valley", Period::valley);
    fill("off_peak", Period::off_peak);
    for (bool s : seen) {
        if (!s) throw ValidationError("partition: not every hour assigned");
    }
    return part;
}

}  // namespace dresp
