#include "dresp/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "dresp/csvio.hpp"

namespace dresp {

const char* const kVersion = "drsim 0.1.0";

namespace {

namespace fs = std::filesystem;

std::string resolve(const fs::path& base, const std::string& ref) {
    fs::path p(ref);
    if (p.is_absolute()) return p.string();
    return (base / p).lexically_normal().string();
}

int line_of_byte_offset(const std::string& path, size_t offset) {
    std::ifstream in(path, std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    int line = 1;
    for (size_t i = 0; i < std::min(offset, text.size()); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

nlohmann::json json_parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(path + ": cannot open file");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        std::ostringstream os;
        os << path << ": line " << line_of_byte_offset(path, e.byte) << ": " << e.what();
        throw ValidationError(os.str());
    }
}

PemModel model_from_string(const std::string& s) {
    if (s == "pem") return PemModel::pem;
    if (s == "dpem") return PemModel::dpem;
    if (s == "spem") return PemModel::spem;
    throw ValidationError("unknown model '" + s + "' (expected pem, dpem or spem)");
}

std::vector<double> load_price_rows(const std::string& path) {
    const CsvTable table = read_csv(path);
    const size_t hour_col = column_index(table, "hour");
    const size_t price_col = column_index(table, "price_cents_per_kwh");
    std::vector<double> price(table.rows.size(), 0.0);
    std::vector<bool> seen(table.rows.size(), false);
    for (size_t i = 0; i < table.rows.size(); ++i) {
        const int line = table.line_of_row(i);
        const int hour = parse_int(table.rows[i][hour_col], path, line);
        if (hour < 0 || hour >= static_cast<int>(table.rows.size()) ||
            seen[static_cast<size_t>(hour)]) {
            std::ostringstream os;
            os << path << ": line " << line << ": hour " << hour
               << " out of range or duplicated";
            throw ValidationError(os.str());
        }
        seen[static_cast<size_t>(hour)] = true;
        const double p = parse_double(table.rows[i][price_col], path, line);
        if (!(p > 0.0)) {
            std::ostringstream os;
            os << path << ": line " << line << ": price must be strictly positive";
            throw ValidationError(os.str());
        }
        price[static_cast<size_t>(hour)] = p;
    }
    return price;
}

struct CatalogEntry {
    CustomerClass cls;  // patterns filled later
    int customer_count = 0;
    std::vector<BusAllocation> buses;
};

std::vector<CatalogEntry> load_catalog(const std::string& path) {
    const nlohmann::json j = json_parse_file(path);
    if (!j.contains("classes") || !j.at("classes").is_array() || j.at("classes").empty()) {
        throw ValidationError(path + ": catalog needs a non-empty 'classes' array");
    }
    std::vector<CatalogEntry> entries;
    std::set<std::string> names;
    for (const auto& cj : j.at("classes")) {
        CatalogEntry e;
        e.cls.name = cj.at("name").get<std::string>();
        if (!names.insert(e.cls.name).second) {
            throw ValidationError(path + ": duplicate class '" + e.cls.name + "'");
        }
        e.cls.kappa = cj.at("kappa").get<double>();
        e.cls.self_elasticity = cj.at("self_elasticity").get<double>();
        const auto& range = cj.at("demand_range_kw");
        e.cls.min_demand_kw = range.at(0).get<double>();
        e.cls.max_demand_kw = range.at(1).get<double>();
        e.customer_count = cj.at("customer_count").get<int>();
        for (const auto& bj : cj.at("buses")) {
            e.buses.push_back(
                BusAllocation{bj.at("bus").get<int>(), bj.at("demand_kw").get<double>()});
        }
        if (e.buses.empty()) {
            throw ValidationError(path + ": class '" + e.cls.name + "' lists no buses");
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

void load_lf_patterns(const std::string& path, int horizon,
                      std::vector<CatalogEntry>& entries) {
    const CsvTable table = read_csv(path);
    const size_t class_col = column_index(table, "class");
    const size_t hour_col = column_index(table, "hour");
    const size_t mean_col = column_index(table, "mean_lf");
    const size_t cov_col = column_index(table, "cov");

    std::map<std::string, CatalogEntry*> by_name;
    for (CatalogEntry& e : entries) {
        e.cls.lf_mean.assign(static_cast<size_t>(horizon), 0.0);
        e.cls.lf_cov.assign(static_cast<size_t>(horizon), 0.0);
        by_name[e.cls.name] = &e;
    }
    std::map<std::string, std::vector<bool>> covered;
    for (size_t i = 0; i < table.rows.size(); ++i) {
        const int line = table.line_of_row(i);
        const std::string& name = table.rows[i][class_col];
        const auto it = by_name.find(name);
        if (it == by_name.end()) {
            std::ostringstream os;
            os << path << ": line " << line << ": class '" << name
               << "' is not in the catalog";
            throw ValidationError(os.str());
        }
        const int hour = parse_int(table.rows[i][hour_col], path, line);
        if (hour < 0 || hour >= horizon) {
            std::ostringstream os;
            os << path << ": line " << line << ": hour " << hour << " outside [0,"
               << horizon << ")";
            throw ValidationError(os.str());
        }
        auto& mask = covered[name];
        mask.resize(static_cast<size_t>(horizon), false);
        if (mask[static_cast<size_t>(hour)]) {
            std::ostringstream os;
            os << path << ": line " << line << ": duplicate pattern entry for class '"
               << name << "' hour " << hour;
            throw ValidationError(os.str());
        }
        mask[static_cast<size_t>(hour)] = true;
        it->second->cls.lf_mean[static_cast<size_t>(hour)] =
            parse_double(table.rows[i][mean_col], path, line);
        it->second->cls.lf_cov[static_cast<size_t>(hour)] =
            parse_double(table.rows[i][cov_col], path, line);
    }
    for (const CatalogEntry& e : entries) {
        const auto it = covered.find(e.cls.name);
        const int have =
            it == covered.end()
                ? 0
                : static_cast<int>(std::count(it->second.begin(), it->second.end(), true));
        if (have != horizon) {
            std::ostringstream os;
            os << path << ": class '" << e.cls.name << "' covers " << have << " of "
               << horizon << " hours";
            throw ValidationError(os.str());
        }
    }
}

std::vector<PemModel> normalized_models(const std::vector<std::string>& names) {
    std::set<PemModel> seen;
    for (const std::string& s : names) seen.insert(model_from_string(s));
    if (seen.empty()) throw ValidationError("scenario: model set must be non-empty");
    std::vector<PemModel> out;
    for (PemModel m : {PemModel::pem, PemModel::dpem, PemModel::spem}) {
        if (seen.count(m)) out.push_back(m);
    }
    return out;
}

}  // namespace

Scenario load_scenario(const std::string& path) {
    const nlohmann::json j = json_parse_file(path);
    Scenario s;
    s.config_path = fs::path(path);
    const fs::path base = s.config_path.parent_path();

    s.price_fixture = resolve(base, j.at("price_fixture").get<std::string>());
    s.class_catalog = resolve(base, j.at("class_catalog").get<std::string>());
    s.lf_patterns = resolve(base, j.at("lf_patterns").get<std::string>());

    const auto& pc = j.at("period_config");
    if (pc.is_string()) {
        s.period_config = json_parse_file(resolve(base, pc.get<std::string>()));
    } else {
        s.period_config = pc;
    }

    s.model_set = normalized_models(j.at("models").get<std::vector<std::string>>());
    s.nominal_price_cents = j.value("nominal_price_cents_per_kwh", 5.0);

    ModelParams& mp = s.model_params;
    mp.pem_cross_fraction = j.value("pem_cross_fraction", 0.15);
    if (j.contains("peak_spec")) {
        const auto& ps = j.at("peak_spec");
        const std::string mode = ps.value("mode", "max_demand");
        if (mode == "max_demand") {
            mp.peak_mode = PeakMode::max_demand;
        } else if (mode == "peak_price") {
            mp.peak_mode = PeakMode::peak_price;
        } else {
            throw ValidationError("scenario: peak_spec.mode must be max_demand or peak_price");
        }
        mp.peak_alpha = ps.value("alpha", 0.12);
        if (ps.contains("peak_elasticity")) {
            mp.peak_elasticity_override = true;
            mp.peak_elasticity = ps.at("peak_elasticity").get<double>();
        }
    }
    if (j.contains("gbm")) {
        const auto& g = j.at("gbm");
        mp.gbm.mu = g.value("mu", 0.2);
        mp.gbm.sigma = g.value("sigma", 1.2);
        mp.gbm.epsilon0_fraction = g.value("epsilon0_fraction", 0.15);
        mp.gbm.recovery_window = g.value("recovery_window", 4);
    }
    mp.floor_demand_kw = j.value("floor_demand_kw", 0.0);

    s.lambda_mode = j.value("lambda_mode", std::string("per_model_default"));
    if (s.lambda_mode == "zero") {
        mp.pem_lambda = mp.dpem_lambda = mp.spem_lambda = LambdaMode::zero;
    } else if (s.lambda_mode == "balance_solve") {
        mp.pem_lambda = mp.dpem_lambda = mp.spem_lambda = LambdaMode::balance_solve;
    } else if (s.lambda_mode != "per_model_default") {
        throw ValidationError(
            "scenario: lambda_mode must be per_model_default, zero or balance_solve");
    }

    s.seed = j.value("seed", 1ULL);
    s.spem_replications = j.value("spem_replications", 1);
    if (s.spem_replications < 1) {
        throw ValidationError("scenario: spem_replications must be >= 1");
    }
    s.output_dir = j.value("output_dir", std::string("out"));
    s.bus_tolerance = j.value("bus_demand_tolerance", 1e-3);
    const std::string exec = j.value("execution", std::string("parallel"));
    if (exec == "serial") {
        s.exec = ExecMode::serial;
    } else if (exec == "parallel") {
        s.exec = ExecMode::parallel;
    } else {
        throw ValidationError("scenario: execution must be serial or parallel");
    }
    s.dump_matrices = j.value("dump_matrices", false);
    return s;
}

nlohmann::json scenario_effective_json(const Scenario& s) {
    nlohmann::json j;
    j["price_fixture"] = s.price_fixture;
    j["class_catalog"] = s.class_catalog;
    j["lf_patterns"] = s.lf_patterns;
    j["period_config"] = s.period_config;
    std::vector<std::string> models;
    for (PemModel m : s.model_set) models.emplace_back(model_name(m));
    j["models"] = models;
    j["nominal_price_cents_per_kwh"] = s.nominal_price_cents;
    const ModelParams& mp = s.model_params;
    j["pem_cross_fraction"] = mp.pem_cross_fraction;
    j["peak_spec"] = {
        {"mode", mp.peak_mode == PeakMode::max_demand ? "max_demand" : "peak_price"},
        {"alpha", mp.peak_alpha}};
    if (mp.peak_elasticity_override) {
        j["peak_spec"]["peak_elasticity"] = mp.peak_elasticity;
    }
    j["gbm"] = {{"mu", mp.gbm.mu},
                {"sigma", mp.gbm.sigma},
                {"epsilon0_fraction", mp.gbm.epsilon0_fraction},
                {"recovery_window", mp.gbm.recovery_window}};
    j["lambda_mode"] = s.lambda_mode;
    j["floor_demand_kw"] = mp.floor_demand_kw;
    j["seed"] = s.seed;
    j["spem_replications"] = s.spem_replications;
    j["bus_demand_tolerance"] = s.bus_tolerance;
    return j;
}

LoadedScenario load_fixtures(const Scenario& scenario) {
    LoadedScenario loaded;
    loaded.signal.utility_price_cents = load_price_rows(scenario.price_fixture);
    loaded.signal.horizon_hours =
        static_cast<int>(loaded.signal.utility_price_cents.size());
    loaded.signal.nominal_price_cents = scenario.nominal_price_cents;
    loaded.signal.validate();

    loaded.partition = classify_hours(
        period_config_from_json(scenario.period_config, loaded.signal.horizon_hours));

    std::vector<CatalogEntry> entries = load_catalog(scenario.class_catalog);
    load_lf_patterns(scenario.lf_patterns, loaded.signal.horizon_hours, entries);

    loaded.population_config.bus_tolerance = scenario.bus_tolerance;
    for (CatalogEntry& e : entries) {
        e.cls.validate(loaded.signal.horizon_hours);
        ClassContext ctx;
        ctx.cls = e.cls;
        ctx.price = build_class_price(loaded.signal, e.cls.kappa);
        loaded.class_prices[e.cls.name] = ctx.price;
        loaded.classes[e.cls.name] = std::move(ctx);
        loaded.population_config.classes.push_back(
            ClassSpec{e.cls, e.customer_count, e.buses});
    }
    return loaded;
}

std::vector<Diagnostic> validate_fixture(const std::string& path, const std::string& kind) {
    std::vector<Diagnostic> diags;
    auto add = [&](const std::string& message, int line = 0) {
        diags.push_back(Diagnostic{path, line, message});
    };
    auto catching = [&](auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            add(e.what());
        }
    };

    if (kind == "price") {
        catching([&] { load_price_rows(path); });
    } else if (kind == "catalog") {
        catching([&] {
            for (const CatalogEntry& e : load_catalog(path)) {
                CustomerClass probe = e.cls;
                probe.lf_mean.assign(1, 0.5);
                probe.lf_cov.assign(1, 0.0);
                probe.validate(1);
                apportion_customer_counts(e.customer_count, e.buses, e.cls.min_demand_kw,
                                          e.cls.max_demand_kw, e.cls.name);
            }
        });
    } else if (kind == "lf") {
        catching([&] {
            const CsvTable table = read_csv(path);
            const size_t mean_col = column_index(table, "mean_lf");
            const size_t cov_col = column_index(table, "cov");
            column_index(table, "class");
            column_index(table, "hour");
            for (size_t i = 0; i < table.rows.size(); ++i) {
                const int line = table.line_of_row(i);
                const double mean = parse_double(table.rows[i][mean_col], path, line);
                const double cov = parse_double(table.rows[i][cov_col], path, line);
                if (!(mean > 0.0) || mean > 1.0) {
                    add("mean load factor must lie in (0,1]", line);
                }
                if (cov < 0.0 || cov >= 1.0) add("COV must lie in [0,1)", line);
            }
        });
    } else if (kind == "period") {
        catching([&] {
            classify_hours(period_config_from_json(json_parse_file(path), 24));
        });
    } else if (kind == "scenario") {
        try {
            const Scenario s = load_scenario(path);
            for (const auto& [ref, refkind] :
                 std::vector<std::pair<std::string, std::string>>{
                     {s.price_fixture, "price"},
                     {s.class_catalog, "catalog"},
                     {s.lf_patterns, "lf"}}) {
                const auto sub = validate_fixture(ref, refkind);
                diags.insert(diags.end(), sub.begin(), sub.end());
            }
            if (diags.empty()) {
                catching([&] { load_fixtures(s); });
            }
        } catch (const std::exception& e) {
            add(e.what());
        }
    } else {
        add("unknown fixture kind '" + kind + "'");
    }
    return diags;
}

void write_population_csv(const std::string& path, const std::vector<Customer>& population) {
    CsvWriter w(path);
    w.row({"customer_id", "class", "bus", "rated_kw", "hour", "lf", "baseline_kw"});
    for (const Customer& c : population) {
        for (size_t t = 0; t < c.baseline_kw.size(); ++t) {
            w.row({std::to_string(c.id), c.class_name, std::to_string(c.bus),
                   format_double(c.rated_kw), std::to_string(t),
                   format_double(c.sampled_lf[t]), format_double(c.baseline_kw[t])});
        }
    }
}

std::vector<Customer> read_population_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    const size_t id_col = column_index(table, "customer_id");
    const size_t class_col = column_index(table, "class");
    const size_t bus_col = column_index(table, "bus");
    const size_t rated_col = column_index(table, "rated_kw");
    const size_t hour_col = column_index(table, "hour");
    const size_t lf_col = column_index(table, "lf");
    const size_t base_col = column_index(table, "baseline_kw");

    std::vector<Customer> population;
    for (size_t i = 0; i < table.rows.size(); ++i) {
        const int line = table.line_of_row(i);
        const int id = parse_int(table.rows[i][id_col], path, line);
        const int hour = parse_int(table.rows[i][hour_col], path, line);
        if (population.empty() || population.back().id != id) {
            if (hour != 0) {
                std::ostringstream os;
                os << path << ": line " << line << ": customer " << id
                   << " rows must start at hour 0";
                throw ValidationError(os.str());
            }
            Customer c;
            c.id = id;
            c.class_name = table.rows[i][class_col];
            c.bus = parse_int(table.rows[i][bus_col], path, line);
            c.rated_kw = parse_double(table.rows[i][rated_col], path, line);
            population.push_back(std::move(c));
        }
        Customer& c = population.back();
        if (hour != static_cast<int>(c.sampled_lf.size())) {
            std::ostringstream os;
            os << path << ": line " << line << ": unexpected hour " << hour
               << " for customer " << id;
            throw ValidationError(os.str());
        }
        c.sampled_lf.push_back(parse_double(table.rows[i][lf_col], path, line));
        c.baseline_kw.push_back(parse_double(table.rows[i][base_col], path, line));
    }
    if (population.empty()) throw ValidationError(path + ": empty population");
    return population;
}

namespace {

void write_outcomes_csv(const std::string& path, const std::vector<Customer>& population,
                        const std::vector<DrOutcome>& outcomes) {
    CsvWriter w(path);
    w.row({"customer_id", "hour", "baseline_kw", "adr_kw", "delta_kw"});
    for (size_t i = 0; i < population.size(); ++i) {
        const Customer& c = population[i];
        const DrOutcome& o = outcomes[i];
        for (size_t t = 0; t < c.baseline_kw.size(); ++t) {
            w.row({std::to_string(c.id), std::to_string(t),
                   format_double(c.baseline_kw[t]), format_double(o.demand_adr_kw[t]),
                   format_double(o.delta_kw[t])});
        }
    }
}

std::vector<DrOutcome> read_outcomes_csv(const std::string& path,
                                         const std::vector<Customer>& population) {
    const CsvTable table = read_csv(path);
    const size_t id_col = column_index(table, "customer_id");
    const size_t hour_col = column_index(table, "hour");
    const size_t adr_col = column_index(table, "adr_kw");
    const size_t delta_col = column_index(table, "delta_kw");

    std::vector<DrOutcome> outcomes(population.size());
    size_t cursor = 0;
    for (size_t i = 0; i < table.rows.size(); ++i) {
        const int line = table.line_of_row(i);
        const int id = parse_int(table.rows[i][id_col], path, line);
        const int hour = parse_int(table.rows[i][hour_col], path, line);
        while (cursor < population.size() && population[cursor].id != id) {
            ++cursor;
        }
        if (cursor >= population.size()) {
            std::ostringstream os;
            os << path << ": line " << line << ": customer " << id
               << " not found in population order";
            throw ValidationError(os.str());
        }
        DrOutcome& o = outcomes[cursor];
        if (hour != static_cast<int>(o.demand_adr_kw.size())) {
            std::ostringstream os;
            os << path << ": line " << line << ": unexpected hour " << hour;
            throw ValidationError(os.str());
        }
        o.demand_adr_kw.push_back(parse_double(table.rows[i][adr_col], path, line));
        o.delta_kw.push_back(parse_double(table.rows[i][delta_col], path, line));
    }
    for (size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes[i].demand_adr_kw.size() != population[i].baseline_kw.size()) {
            throw ValidationError(path + ": incomplete outcome rows");
        }
    }
    return outcomes;
}

void write_summary_csv(const std::string& path, const std::vector<Customer>& population,
                       const std::vector<DrOutcome>& outcomes) {
    CsvWriter w(path);
    w.row({"customer_id", "lambda", "residual_kwh", "curtailed_kwh", "shifted_kwh",
           "clamped_hours"});
    for (size_t i = 0; i < population.size(); ++i) {
        const DrOutcome& o = outcomes[i];
        w.row({std::to_string(population[i].id), format_double(o.lambda_used),
               format_double(o.balance_residual_kwh), format_double(o.curtailed_peak_kwh),
               format_double(o.shifted_off_kwh), std::to_string(o.clamped_hours)});
    }
}

struct RepAggregate {
    int replication = 0;
    double total_cost_cents = 0.0;
    double total_energy_kwh = 0.0;
};

MethodAggregate method_aggregate(const std::string& method,
                                 const std::vector<Customer>& population,
                                 const std::vector<DrOutcome>& outcomes,
                                 const std::map<std::string, ClassPrice>& class_prices,
                                 const PeriodPartition& partition) {
    MethodAggregate agg;
    agg.method = method;
    for (size_t i = 0; i < population.size(); ++i) {
        const ClassPrice& price = class_prices.at(population[i].class_name);
        agg.total_cost_cents +=
            bill(outcomes[i].demand_adr_kw, price.class_price_cents, partition)
                .total_cents();
        for (double d : outcomes[i].demand_adr_kw) agg.total_energy_kwh += d;
        for (double d : population[i].baseline_kw) agg.baseline_energy_kwh += d;
    }
    return agg;
}

std::pair<double, double> base_cost_energy(
    const std::vector<Customer>& population,
    const std::map<std::string, ClassPrice>& class_prices,
    const PeriodPartition& partition) {
    double cost = 0.0, energy = 0.0;
    for (const Customer& c : population) {
        const ClassPrice& price = class_prices.at(c.class_name);
        const std::vector<double> flat(c.baseline_kw.size(), price.class_nominal_cents);
        cost += bill(c.baseline_kw, flat, partition).total_cents();
        for (double d : c.baseline_kw) energy += d;
    }
    return {cost, energy};
}

void write_bills_by_period_csv(const std::string& path,
                               const std::vector<std::pair<std::string, BillReport>>& reports) {
    CsvWriter w(path);
    w.row({"model", "class", "state", "period", "bill_cents"});
    for (const auto& [model, report] : reports) {
        for (const ClassBill& cb : report.per_class) {
            for (Period p : {Period::peak, Period::valley, Period::off_peak}) {
                w.row({model, cb.class_name, "bdr", period_name(p),
                       format_fixed(cb.bdr.of(p), 2)});
            }
            for (Period p : {Period::peak, Period::valley, Period::off_peak}) {
                w.row({model, cb.class_name, "adr", period_name(p),
                       format_fixed(cb.adr.of(p), 2)});
            }
        }
    }
}

void write_bills_by_class_csv(const std::string& path,
                              const std::vector<std::pair<std::string, BillReport>>& reports) {
    CsvWriter w(path);
    w.row({"model", "class", "bdr_cents", "adr_cents", "diff_cents", "pct_change"});
    for (const auto& [model, report] : reports) {
        auto emit = [&](const ClassBill& cb) {
            w.row({model, cb.class_name, format_fixed(cb.bdr.total_cents(), 2),
                   format_fixed(cb.adr.total_cents(), 2), format_fixed(cb.diff_cents(), 2),
                   format_fixed(cb.pct_change(), 2)});
        };
        for (const ClassBill& cb : report.per_class) emit(cb);
        emit(report.overall);
    }
}

void write_curtail_shift_csv(
    const std::string& path,
    const std::vector<std::pair<std::string, std::vector<CurtailShiftRow>>>& reports) {
    CsvWriter w(path);
    w.row({"model", "class", "period", "baseline_kwh", "delta_kwh", "pct_change"});
    for (const auto& [model, rows] : reports) {
        for (const CurtailShiftRow& r : rows) {
            w.row({model, r.class_name, period_name(r.period),
                   format_fixed(r.baseline_kwh, 3), format_fixed(r.delta_kwh, 3),
                   format_fixed(r.pct_change(), 2)});
        }
    }
}

void write_load_factor_csv(
    const std::string& path,
    const std::vector<std::pair<std::string, std::vector<double>>>& series) {
    CsvWriter w(path);
    w.row({"series", "hour", "load_factor"});
    for (const auto& [name, curve] : series) {
        for (size_t t = 0; t < curve.size(); ++t) {
            w.row({name, std::to_string(t), format_fixed(curve[t], 6)});
        }
    }
}

void write_comparison_csv(const std::string& path, const std::vector<ComparisonRow>& rows) {
    CsvWriter w(path);
    w.row({"method", "total_cost_cents", "diff_cents", "pct_change", "total_energy_kwh",
           "energy_pct_change"});
    for (const ComparisonRow& r : rows) {
        w.row({r.method, format_fixed(r.total_cost_cents, 2),
               r.is_base ? "" : format_fixed(r.diff_cents, 2),
               format_fixed(r.is_base ? 0.0 : r.pct_change, 2),
               format_fixed(r.total_energy_kwh, 2),
               format_fixed(r.is_base ? 0.0 : r.energy_pct_change, 4)});
    }
}

void write_spem_replications_csv(const std::string& path,
                                 const std::vector<RepAggregate>& reps, double base_cost,
                                 double base_energy) {
    CsvWriter w(path);
    w.row({"replication", "total_cost_cents", "cost_delta_cents", "total_energy_kwh",
           "energy_delta_kwh"});
    for (const RepAggregate& r : reps) {
        w.row({std::to_string(r.replication), format_double(r.total_cost_cents),
               format_double(r.total_cost_cents - base_cost),
               format_double(r.total_energy_kwh),
               format_double(r.total_energy_kwh - base_energy)});
    }
}

void write_spem_summary_csv(const std::string& path, const std::vector<RepAggregate>& reps,
                            double base_cost, double base_energy) {
    auto mean_std = [](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        var = v.size() > 1 ? var / static_cast<double>(v.size() - 1) : 0.0;
        return std::pair<double, double>(mean, std::sqrt(var));
    };
    std::vector<double> cost_delta, energy_delta;
    for (const RepAggregate& r : reps) {
        cost_delta.push_back(r.total_cost_cents - base_cost);
        energy_delta.push_back(r.total_energy_kwh - base_energy);
    }
    const auto [cost_mean, cost_std] = mean_std(cost_delta);
    const auto [energy_mean, energy_std] = mean_std(energy_delta);
    CsvWriter w(path);
    w.row({"metric", "mean", "std"});
    w.row({"cost_delta_cents", format_double(cost_mean), format_double(cost_std)});
    w.row({"energy_delta_kwh", format_double(energy_mean), format_double(energy_std)});
}

struct ModelRun {
    PemModel model = PemModel::pem;
    std::vector<DrOutcome> outcomes;        // SPEM: first replication
    std::vector<RepAggregate> replications; // SPEM only; one entry otherwise
};

std::string hash_hex(uint64_t h) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
    nlohmann::json j;
    j["version"] = manifest.version;
    j["scenario_hash"] = hash_hex(manifest.scenario_hash);
    j["seed"] = manifest.seed;
    j["files"] = manifest.files;
    j["wall_clock_seconds"] = manifest.wall_clock_seconds;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << j.dump(2) << '\n';
}

void write_all_reports(const fs::path& out,
                       const std::vector<Customer>& population,
                       const std::vector<ModelRun>& runs,
                       const LoadedScenario& loaded, double base_cost,
                       double base_energy, std::vector<std::string>& report_files) {
    std::vector<std::pair<std::string, BillReport>> bills;
    std::vector<std::pair<std::string, std::vector<CurtailShiftRow>>> curtails;
    std::vector<std::pair<std::string, std::vector<double>>> lf_series;
    std::vector<MethodAggregate> aggregates;

    bool base_curve_added = false;
    for (const ModelRun& run : runs) {
        const std::string name = model_name(run.model);
        bills.emplace_back(name, bill_report(population, run.outcomes,
                                             loaded.class_prices, loaded.partition));
        curtails.emplace_back(
            name, curtail_shift_report(population, run.outcomes, loaded.partition));
        const LoadFactorCurves curves = load_factor_curves(population, run.outcomes);
        if (!base_curve_added) {
            lf_series.emplace_back("base", curves.bdr);
            base_curve_added = true;
        }
        lf_series.emplace_back(name, curves.adr);

        MethodAggregate agg;
        agg.method = name;
        agg.baseline_energy_kwh = base_energy;
        double n = static_cast<double>(run.replications.size());
        for (const RepAggregate& r : run.replications) {
            agg.total_cost_cents += r.total_cost_cents;
            agg.total_energy_kwh += r.total_energy_kwh;
        }
        agg.total_cost_cents /= n;
        agg.total_energy_kwh /= n;
        aggregates.push_back(agg);
    }

    write_bills_by_period_csv((out / "bills_by_period.csv").string(), bills);
    write_bills_by_class_csv((out / "bills_by_class.csv").string(), bills);
    write_curtail_shift_csv((out / "curtail_shift.csv").string(), curtails);
    write_load_factor_csv((out / "load_factor.csv").string(), lf_series);
    write_comparison_csv((out / "comparison.csv").string(),
                         comparison_table(base_cost, base_energy, aggregates));
    report_files = {"bills_by_period.csv", "bills_by_class.csv", "curtail_shift.csv",
                    "load_factor.csv", "comparison.csv"};
}

}  // namespace

RunManifest run_scenario(const Scenario& scenario) {
    const auto start = std::chrono::steady_clock::now();
    const LoadedScenario loaded = load_fixtures(scenario);

    RngStream population_rng(derive_seed(scenario.seed, "population"));
    const std::vector<Customer> population =
        build_population(loaded.population_config, population_rng);

    const auto [base_cost, base_energy] =
        base_cost_energy(population, loaded.class_prices, loaded.partition);

    std::vector<ModelRun> runs;
    for (PemModel model : scenario.model_set) {
        ModelRun run;
        run.model = model;
        ModelParams params = scenario.model_params;
        const int reps = model == PemModel::spem ? scenario.spem_replications : 1;
        for (int k = 0; k < reps; ++k) {
            params.gbm.seed = derive_seed(scenario.seed, "gbm", static_cast<uint64_t>(k));
            std::vector<DrOutcome> outcomes = evaluate_model(
                model, population, loaded.classes, loaded.partition, params, scenario.exec);
            RepAggregate agg;
            agg.replication = k;
            const MethodAggregate m =
                method_aggregate(model_name(model), population, outcomes,
                                 loaded.class_prices, loaded.partition);
            agg.total_cost_cents = m.total_cost_cents;
            agg.total_energy_kwh = m.total_energy_kwh;
            run.replications.push_back(agg);
            if (k == 0) run.outcomes = std::move(outcomes);
        }
        runs.push_back(std::move(run));
    }

    // Single write phase in a fixed order.
    const fs::path out(scenario.output_dir);
    fs::create_directories(out);
    RunManifest manifest;
    manifest.version = kVersion;
    manifest.scenario_hash = fnv1a64(scenario_effective_json(scenario).dump());
    manifest.seed = scenario.seed;

    write_population_csv((out / "population.csv").string(), population);
    manifest.files["shared"].push_back("population.csv");

    for (const ModelRun& run : runs) {
        const std::string name = model_name(run.model);
        const std::string outcomes_file = "outcomes_" + name + ".csv";
        const std::string summary_file = "summary_" + name + ".csv";
        write_outcomes_csv((out / outcomes_file).string(), population, run.outcomes);
        write_summary_csv((out / summary_file).string(), population, run.outcomes);
        manifest.files[name] = {outcomes_file, summary_file};
        if (run.model == PemModel::spem) {
            write_spem_replications_csv((out / "spem_replications.csv").string(),
                                        run.replications, base_cost, base_energy);
            write_spem_summary_csv((out / "spem_summary.csv").string(), run.replications,
                                   base_cost, base_energy);
            manifest.files[name].push_back("spem_replications.csv");
            manifest.files[name].push_back("spem_summary.csv");
        }
        if (scenario.dump_matrices) {
            const fs::path mdir = out / "matrices" / name;
            fs::create_directories(mdir);
            ModelParams params = scenario.model_params;
            params.gbm.seed = derive_seed(scenario.seed, "gbm", 0);
            for (const Customer& c : population) {
                const std::string mfile =
                    "matrices/" + name + "/customer_" + std::to_string(c.id) + ".csv";
                write_matrix_csv(build_model_matrix(run.model, c,
                                                    loaded.classes.at(c.class_name),
                                                    loaded.partition, params),
                                 (out / fs::path(mfile)).string());
                manifest.files["matrices"].push_back(mfile);
            }
        }
    }

    std::vector<std::string> report_files;
    write_all_reports(out, population, runs, loaded, base_cost, base_energy, report_files);
    manifest.files["reports"] = report_files;

    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest((out / "manifest.json").string(), manifest);
    manifest.files["manifest"] = {"manifest.json"};
    return manifest;
}

void regenerate_reports(const Scenario& scenario, const std::string& out_dir) {
    const LoadedScenario loaded = load_fixtures(scenario);
    const fs::path out(out_dir);
    const std::vector<Customer> population =
        read_population_csv((out / "population.csv").string());
    const auto [base_cost, base_energy] =
        base_cost_energy(population, loaded.class_prices, loaded.partition);

    std::vector<ModelRun> runs;
    for (PemModel model : scenario.model_set) {
        ModelRun run;
        run.model = model;
        const std::string name = model_name(model);
        run.outcomes = read_outcomes_csv(
            (out / ("outcomes_" + name + ".csv")).string(), population);
        if (model == PemModel::spem) {
            const CsvTable reps =
                read_csv((out / "spem_replications.csv").string());
            const size_t rep_col = column_index(reps, "replication");
            const size_t cost_col = column_index(reps, "total_cost_cents");
            const size_t energy_col = column_index(reps, "total_energy_kwh");
            for (size_t i = 0; i < reps.rows.size(); ++i) {
                RepAggregate agg;
                agg.replication =
                    parse_int(reps.rows[i][rep_col], reps.path, reps.line_of_row(i));
                agg.total_cost_cents =
                    parse_double(reps.rows[i][cost_col], reps.path, reps.line_of_row(i));
                agg.total_energy_kwh =
                    parse_double(reps.rows[i][energy_col], reps.path, reps.line_of_row(i));
                run.replications.push_back(agg);
            }
        } else {
            RepAggregate agg;
            const MethodAggregate m = method_aggregate(
                name, population, run.outcomes, loaded.class_prices, loaded.partition);
            agg.total_cost_cents = m.total_cost_cents;
            agg.total_energy_kwh = m.total_energy_kwh;
            run.replications.push_back(agg);
        }
        runs.push_back(std::move(run));
    }

    std::vector<std::string> report_files;
    write_all_reports(out, population, runs, loaded, base_cost, base_energy, report_files);
}

}  // namespace dresp
