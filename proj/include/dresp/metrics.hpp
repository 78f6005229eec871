#pragma once

#include <map>
#include <string>
#include <vector>

#include "dresp/customers.hpp"
#include "dresp/engine.hpp"
#include "dresp/tariff.hpp"

namespace dresp {

struct PeriodBills {
    double peak_cents = 0.0;
    double valley_cents = 0.0;
    double off_peak_cents = 0.0;

    double total_cents() const { return peak_cents + valley_cents + off_peak_cents; }
    double of(Period p) const;
};

// Bill of one profile under one hourly price vector, split by period.
PeriodBills bill(const std::vector<double>& profile_kw,
                 const std::vector<double>& price_cents,
                 const PeriodPartition& partition);

struct ClassBill {
    std::string class_name;
    PeriodBills bdr;  // baseline billed at the flat nominal class price
    PeriodBills adr;  // post-DR demand billed at the dynamic class price
    double diff_cents() const { return adr.total_cents() - bdr.total_cents(); }
    double pct_change() const { return 100.0 * diff_cents() / bdr.total_cents(); }
};

struct BillReport {
    std::vector<ClassBill> per_class;
    ClassBill overall;  // class_name "overall"
};

// Aggregated class bills before DR (flat nominal pricing) and after DR
// (dynamic pricing). `population` and `outcomes` must be aligned.
BillReport bill_report(const std::vector<Customer>& population,
                       const std::vector<DrOutcome>& outcomes,
                       const std::map<std::string, ClassPrice>& class_prices,
                       const PeriodPartition& partition);

struct LoadFactorCurves {
    std::vector<double> bdr;  // aggregate baseline / max aggregate baseline
    std::vector<double> adr;  // aggregate post-DR demand on the same scale
};

LoadFactorCurves load_factor_curves(const std::vector<Customer>& population,
                                    const std::vector<DrOutcome>& outcomes);

struct CurtailShiftRow {
    std::string class_name;
    Period period = Period::peak;
    double baseline_kwh = 0.0;
    double delta_kwh = 0.0;
    double pct_change() const {
        return baseline_kwh == 0.0 ? 0.0 : 100.0 * delta_kwh / baseline_kwh;
    }
};

// Percentage demand change per class and period.
std::vector<CurtailShiftRow> curtail_shift_report(
    const std::vector<Customer>& population, const std::vector<DrOutcome>& outcomes,
    const PeriodPartition& partition);

struct MethodAggregate {
    std::string method;
    double total_cost_cents = 0.0;
    double total_energy_kwh = 0.0;
    double baseline_energy_kwh = 0.0;  // for the shared-population check
};

struct ComparisonRow {
    std::string method;
    double total_cost_cents = 0.0;
    bool is_base = false;
    double diff_cents = 0.0;
    double pct_change = 0.0;
    double total_energy_kwh = 0.0;
    double energy_pct_change = 0.0;
};

// Base row plus one row per method; rejects methods whose baseline energy
// disagrees with the base (mismatched populations).
std::vector<ComparisonRow> comparison_table(double base_cost_cents,
                                            double base_energy_kwh,
                                            const std::vector<MethodAggregate>& methods);

}  // namespace dresp
