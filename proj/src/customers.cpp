#include "dresp/customers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace dresp {

void CustomerClass::validate(int horizon_hours) const {
    std::ostringstream os;
    if (name.empty()) throw ValidationError("customer class: empty name");
    if (!(1.0 + kappa > 0.0)) {
        os << "class " << name << ": kappa <= -1";
        throw ValidationError(os.str());
    }
    if (self_elasticity > 0.0) {
        os << "class " << name << ": self-elasticity must be <= 0";
        throw ValidationError(os.str());
    }
    if (!(min_demand_kw > 0.0) || min_demand_kw > max_demand_kw) {
        os << "class " << name << ": demand range must satisfy 0 < min <= max";
        throw ValidationError(os.str());
    }
    if (static_cast<int>(lf_mean.size()) != horizon_hours ||
        static_cast<int>(lf_cov.size()) != horizon_hours) {
        os << "class " << name << ": load-factor pattern must cover all "
           << horizon_hours << " hours";
        throw ValidationError(os.str());
    }
    for (int t = 0; t < horizon_hours; ++t) {
        const double m = lf_mean[static_cast<size_t>(t)];
        const double c = lf_cov[static_cast<size_t>(t)];
        if (!(m > 0.0) || m > 1.0) {
            os << "class " << name << ": mean load factor at hour " << t
               << " must lie in (0,1]";
            throw ValidationError(os.str());
        }
        // cov >= 1 would allow the truncation interval to reach zero and
        // break profile positivity.
        if (c < 0.0 || c >= 1.0) {
            os << "class " << name << ": COV at hour " << t << " must lie in [0,1)";
            throw ValidationError(os.str());
        }
    }
}

LfBounds lf_bounds(const CustomerClass& cls, int hour) {
    const double mean = cls.lf_mean.at(static_cast<size_t>(hour));
    const double sd = cls.lf_cov.at(static_cast<size_t>(hour)) * mean;
    return LfBounds{mean - sd, mean + sd, mean, sd};
}

double sample_load_factor(const LfBounds& bounds, RngStream& rng) {
    constexpr int kMaxAttempts = 10000;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const double u = rng.uniform01();
        const double lf = bounds.mean + bounds.sd * normal_quantile(u);
        if (lf >= bounds.lower && lf <= bounds.upper) return lf;
    }
    throw std::runtime_error("sample_load_factor: rejection loop exceeded 10000 attempts");
}

Customer synthesize_customer(const CustomerClass& cls, int bus, double rated_kw,
                             RngStream& rng, int id) {
    if (rated_kw < cls.min_demand_kw || rated_kw > cls.max_demand_kw) {
        std::ostringstream os;
        os << "customer of class " << cls.name << ": rated demand " << rated_kw
           << " kW outside [" << cls.min_demand_kw << ", " << cls.max_demand_kw << "]";
        throw ValidationError(os.str());
    }
    const int T = static_cast<int>(cls.lf_mean.size());
    Customer c;
    c.id = id;
    c.class_name = cls.name;
    c.bus = bus;
    c.rated_kw = rated_kw;
    c.sampled_lf.resize(static_cast<size_t>(T));
    c.baseline_kw.resize(static_cast<size_t>(T));
    for (int t = 0; t < T; ++t) {
        const LfBounds b = lf_bounds(cls, t);
        const double lf = sample_load_factor(b, rng);
        c.sampled_lf[static_cast<size_t>(t)] = lf;
        c.baseline_kw[static_cast<size_t>(t)] = lf * rated_kw;
    }
    return c;
}

std::vector<int> apportion_customer_counts(int total_count,
                                           const std::vector<BusAllocation>& buses,
                                           double min_kw, double max_kw,
                                           const std::string& class_name) {
    const size_t n = buses.size();
    if (n == 0) throw ValidationError("class " + class_name + ": no buses allocated");

    std::vector<int> lo(n), hi(n);
    double total_demand = 0.0;
    for (size_t b = 0; b < n; ++b) {
        const double d = buses[b].demand_kw;
        if (!(d > 0.0)) {
            std::ostringstream os;
            os << "class " << class_name << ": bus " << buses[b].bus
               << " has non-positive demand";
            throw ValidationError(os.str());
        }
        lo[b] = static_cast<int>(std::ceil(d / max_kw - 1e-9));
        hi[b] = static_cast<int>(std::floor(d / min_kw + 1e-9));
        lo[b] = std::max(lo[b], 1);
        if (lo[b] > hi[b]) {
            std::ostringstream os;
            os << "class " << class_name << ": bus " << buses[b].bus << " demand "
               << d << " kW cannot be split into customers in [" << min_kw << ", "
               << max_kw << "] kW";
            throw ValidationError(os.str());
        }
        total_demand += d;
    }
    const long lo_sum = std::accumulate(lo.begin(), lo.end(), 0L);
    const long hi_sum = std::accumulate(hi.begin(), hi.end(), 0L);
    if (total_count < lo_sum || total_count > hi_sum) {
        std::ostringstream os;
        os << "class " << class_name << ": customer count " << total_count
           << " outside feasible range [" << lo_sum << ", " << hi_sum
           << "] implied by bus demands and the demand range";
        throw ValidationError(os.str());
    }

    // Proportional shares, largest remainder, then clamp into [lo, hi]
    // and shift the shortfall/excess onto buses with slack.
    std::vector<int> count(n);
    std::vector<std::pair<double, size_t>> remainder(n);
    int assigned = 0;
    for (size_t b = 0; b < n; ++b) {
        const double share = total_count * buses[b].demand_kw / total_demand;
        count[b] = static_cast<int>(std::floor(share));
        remainder[b] = {share - std::floor(share), b};
        assigned += count[b];
    }
    std::sort(remainder.begin(), remainder.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (int k = 0; k < total_count - assigned; ++k) {
        count[remainder[static_cast<size_t>(k) % n].second] += 1;
    }
    for (size_t b = 0; b < n; ++b) count[b] = std::clamp(count[b], lo[b], hi[b]);

    long sum = std::accumulate(count.begin(), count.end(), 0L);
    while (sum != total_count) {
        bool moved = false;
        for (size_t b = 0; b < n && sum != total_count; ++b) {
            if (sum < total_count && count[b] < hi[b]) {
                ++count[b];
                ++sum;
                moved = true;
            } else if (sum > total_count && count[b] > lo[b]) {
                --count[b];
                --sum;
                moved = true;
            }
        }
        if (!moved) {
            throw ValidationError("class " + class_name +
                                  ": unable to apportion customer counts");
        }
    }
    return count;
}

std::vector<double> split_bus_demand(double target_kw, int count, double min_kw,
                                     double max_kw, RngStream& rng, int bus,
                                     const std::string& class_name) {
    std::ostringstream os;
    if (count <= 0) {
        os << "class " << class_name << ": bus " << bus << " assigned zero customers";
        throw ValidationError(os.str());
    }
    const double eps = 1e-9 * std::max(1.0, target_kw);
    if (count * min_kw > target_kw + eps || count * max_kw < target_kw - eps) {
        os << "class " << class_name << ": bus " << bus << " demand " << target_kw
           << " kW infeasible for " << count << " customers in [" << min_kw << ", "
           << max_kw << "] kW";
        throw ValidationError(os.str());
    }

    std::vector<double> rated(static_cast<size_t>(count));
    for (double& r : rated) r = rng.uniform(min_kw, max_kw);

    // Rescale the still-free entries toward the residual target; entries
    // that leave the range get pinned at the bound. The rescale factor is
    // monotone, so this terminates in at most `count` rounds.
    std::vector<bool> pinned(static_cast<size_t>(count), false);
    for (int round = 0; round < count; ++round) {
        double pinned_sum = 0.0, free_sum = 0.0;
        for (size_t i = 0; i < rated.size(); ++i) {
            (pinned[i] ? pinned_sum : free_sum) += rated[i];
        }
        if (free_sum <= 0.0) break;
        const double scale = (target_kw - pinned_sum) / free_sum;
        bool newly_pinned = false;
        for (size_t i = 0; i < rated.size(); ++i) {
            if (pinned[i]) continue;
            double v = rated[i] * scale;
            if (v < min_kw) {
                v = min_kw;
                pinned[i] = true;
                newly_pinned = true;
            } else if (v > max_kw) {
                v = max_kw;
                pinned[i] = true;
                newly_pinned = true;
            }
            rated[i] = v;
        }
        if (!newly_pinned) break;
    }

    const double total = std::accumulate(rated.begin(), rated.end(), 0.0);
    if (std::abs(total - target_kw) > 1e-3 * target_kw) {
        os << "class " << class_name << ": bus " << bus
           << " demand split failed to converge (" << total << " vs " << target_kw
           << " kW)";
        throw ValidationError(os.str());
    }
    return rated;
}

std::vector<Customer> build_population(const PopulationConfig& config, RngStream& rng) {
    std::vector<Customer> population;
    int next_id = 1;
    for (const ClassSpec& spec : config.classes) {
        if (spec.cls.lf_mean.empty()) {
            throw ValidationError("class " + spec.cls.name + ": missing load-factor pattern");
        }
        spec.cls.validate(static_cast<int>(spec.cls.lf_mean.size()));
        const std::vector<int> counts = apportion_customer_counts(
            spec.customer_count, spec.buses, spec.cls.min_demand_kw,
            spec.cls.max_demand_kw, spec.cls.name);
        for (size_t b = 0; b < spec.buses.size(); ++b) {
            const std::vector<double> rated =
                split_bus_demand(spec.buses[b].demand_kw, counts[b],
                                 spec.cls.min_demand_kw, spec.cls.max_demand_kw, rng,
                                 spec.buses[b].bus, spec.cls.name);
            double bus_total = 0.0;
            for (double r : rated) {
                population.push_back(
                    synthesize_customer(spec.cls, spec.buses[b].bus, r, rng, next_id++));
                bus_total += r;
            }
            if (std::abs(bus_total - spec.buses[b].demand_kw) >
                config.bus_tolerance * spec.buses[b].demand_kw) {
                std::ostringstream os;
                os << "class " << spec.cls.name << ": bus " << spec.buses[b].bus
                   << " rated total " << bus_total << " kW misses target "
                   << spec.buses[b].demand_kw << " kW";
                throw ValidationError(os.str());
            }
        }
    }
    return population;
}

}  // namespace dresp
