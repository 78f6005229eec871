#include "dresp/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace dresp {

double PeriodBills::of(Period p) const {
    switch (p) {
        case Period::peak: return peak_cents;
        case Period::valley: return valley_cents;
        case Period::off_peak: return off_peak_cents;
    }
    return 0.0;
}

PeriodBills bill(const std::vector<double>& profile_kw,
                 const std::vector<double>& price_cents,
                 const PeriodPartition& partition) {
    const size_t T = profile_kw.size();
    if (price_cents.size() != T || static_cast<size_t>(partition.horizon_hours) != T) {
        throw ValidationError("bill: profile/price/partition sizes disagree");
    }
    PeriodBills bills;
    for (size_t t = 0; t < T; ++t) {
        const double cents = profile_kw[t] * price_cents[t];  // 1 h steps
        switch (partition.at(static_cast<int>(t))) {
            case Period::peak: bills.peak_cents += cents; break;
            case Period::valley: bills.valley_cents += cents; break;
            case Period::off_peak: bills.off_peak_cents += cents; break;
        }
    }
    return bills;
}

namespace {

void accumulate(PeriodBills& into, const PeriodBills& add) {
    into.peak_cents += add.peak_cents;
    into.valley_cents += add.valley_cents;
    into.off_peak_cents += add.off_peak_cents;
}

void check_aligned(const std::vector<Customer>& population,
                   const std::vector<DrOutcome>& outcomes) {
    if (population.size() != outcomes.size() || population.empty()) {
        throw ValidationError("metrics: population and outcomes must align");
    }
}

}  // namespace

BillReport bill_report(const std::vector<Customer>& population,
                       const std::vector<DrOutcome>& outcomes,
                       const std::map<std::string, ClassPrice>& class_prices,
                       const PeriodPartition& partition) {
    check_aligned(population, outcomes);
    std::map<std::string, ClassBill> by_class;
    for (size_t i = 0; i < population.size(); ++i) {
        const Customer& c = population[i];
        const auto it = class_prices.find(c.class_name);
        if (it == class_prices.end()) {
            throw ValidationError("bill_report: unknown class " + c.class_name);
        }
        const ClassPrice& price = it->second;
        const std::vector<double> flat(c.baseline_kw.size(), price.class_nominal_cents);
        ClassBill& entry = by_class[c.class_name];
        entry.class_name = c.class_name;
        accumulate(entry.bdr, bill(c.baseline_kw, flat, partition));
        accumulate(entry.adr, bill(outcomes[i].demand_adr_kw,
                                   price.class_price_cents, partition));
    }
    BillReport report;
    report.overall.class_name = "overall";
    for (auto& [name, entry] : by_class) {
        accumulate(report.overall.bdr, entry.bdr);
        accumulate(report.overall.adr, entry.adr);
        report.per_class.push_back(std::move(entry));
    }
    return report;
}

LoadFactorCurves load_factor_curves(const std::vector<Customer>& population,
                                    const std::vector<DrOutcome>& outcomes) {
    check_aligned(population, outcomes);
    const size_t T = population.front().baseline_kw.size();
    LoadFactorCurves curves;
    curves.bdr.assign(T, 0.0);
    curves.adr.assign(T, 0.0);
    for (size_t i = 0; i < population.size(); ++i) {
        for (size_t t = 0; t < T; ++t) {
            curves.bdr[t] += population[i].baseline_kw[t];
            curves.adr[t] += outcomes[i].demand_adr_kw[t];
        }
    }
    const double peak = *std::max_element(curves.bdr.begin(), curves.bdr.end());
    if (!(peak > 0.0)) throw ValidationError("load_factor_curves: zero aggregate demand");
    // Both curves share the baseline maximum as the scale so they can be
    // compared on one axis.
    for (size_t t = 0; t < T; ++t) {
        curves.bdr[t] /= peak;
        curves.adr[t] /= peak;
    }
    return curves;
}

std::vector<CurtailShiftRow> curtail_shift_report(
    const std::vector<Customer>& population, const std::vector<DrOutcome>& outcomes,
    const PeriodPartition& partition) {
    check_aligned(population, outcomes);
    std::map<std::string, std::map<int, CurtailShiftRow>> by_class;
    for (size_t i = 0; i < population.size(); ++i) {
        const Customer& c = population[i];
        for (size_t t = 0; t < c.baseline_kw.size(); ++t) {
            const Period p = partition.at(static_cast<int>(t));
            CurtailShiftRow& row = by_class[c.class_name][static_cast<int>(p)];
            row.class_name = c.class_name;
            row.period = p;
            row.baseline_kwh += c.baseline_kw[t];
            row.delta_kwh += outcomes[i].delta_kw[t];
        }
    }
    std::vector<CurtailShiftRow> rows;
    for (const auto& [name, periods] : by_class) {
        for (const auto& [p, row] : periods) rows.push_back(row);
    }
    return rows;
}

std::vector<ComparisonRow> comparison_table(double base_cost_cents,
                                            double base_energy_kwh,
                                            const std::vector<MethodAggregate>& methods) {
    if (!(base_cost_cents > 0.0) || !(base_energy_kwh > 0.0)) {
        throw ValidationError("comparison_table: base cost/energy must be positive");
    }
    std::vector<ComparisonRow> rows;
    ComparisonRow base;
    base.method = "base";
    base.is_base = true;
    base.total_cost_cents = base_cost_cents;
    base.total_energy_kwh = base_energy_kwh;
    rows.push_back(base);
    for (const MethodAggregate& m : methods) {
        if (std::abs(m.baseline_energy_kwh - base_energy_kwh) >
            1e-9 * base_energy_kwh) {
            throw ValidationError("comparison_table: method '" + m.method +
                                  "' was evaluated on a different population");
        }
        ComparisonRow row;
        row.method = m.method;
        row.total_cost_cents = m.total_cost_cents;
        row.diff_cents = m.total_cost_cents - base_cost_cents;
        row.pct_change = 100.0 * row.diff_cents / base_cost_cents;
        row.total_energy_kwh = m.total_energy_kwh;
        row.energy_pct_change =
            100.0 * (m.total_energy_kwh - base_energy_kwh) / base_energy_kwh;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace dresp
