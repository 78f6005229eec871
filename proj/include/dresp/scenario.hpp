#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "dresp/customers.hpp"
#include "dresp/metrics.hpp"
#include "dresp/simulate.hpp"

namespace dresp {

// One simulation scenario, as described by a JSON configuration document.
struct Scenario {
    std::filesystem::path config_path;
    std::string price_fixture;   // CSV: hour,price_cents_per_kwh
    std::string class_catalog;   // JSON class catalog
    std::string lf_patterns;     // CSV: class,hour,mean_lf,cov
    nlohmann::json period_config;  // inline object (file reference already resolved)
    std::vector<PemModel> model_set;
    double nominal_price_cents = 5.0;
    ModelParams model_params;
    std::string lambda_mode = "per_model_default";  // or "zero" / "balance_solve"
    uint64_t seed = 1;
    int spem_replications = 1;
    std::string output_dir = "out";
    double bus_tolerance = 1e-3;
    ExecMode exec = ExecMode::parallel;
    bool dump_matrices = false;
};

Scenario load_scenario(const std::string& path);

// Resolved configuration (after CLI overrides); its canonical dump feeds
// the scenario hash in the manifest.
nlohmann::json scenario_effective_json(const Scenario& scenario);

struct Diagnostic {
    std::string file;
    int line = 0;  // 0 when no line applies
    std::string message;
};

// kind: "price", "catalog", "lf", "period" or "scenario" (which also
// validates every referenced fixture). Empty result means usable.
std::vector<Diagnostic> validate_fixture(const std::string& path, const std::string& kind);

// Fixtures parsed and cross-checked, ready to simulate.
struct LoadedScenario {
    PriceSignal signal;
    PeriodPartition partition;
    PopulationConfig population_config;
    std::map<std::string, ClassContext> classes;
    std::map<std::string, ClassPrice> class_prices;
};

LoadedScenario load_fixtures(const Scenario& scenario);

struct RunManifest {
    std::string version;
    uint64_t scenario_hash = 0;
    uint64_t seed = 0;
    std::map<std::string, std::vector<std::string>> files;  // section -> file names
    double wall_clock_seconds = 0.0;
};

// Runs the scenario end to end: synthesizes the population once, runs
// every selected model (SPEM over the configured replications), writes
// all CSV exports and the manifest into the output directory.
RunManifest run_scenario(const Scenario& scenario);

// Rebuilds the report CSVs from the stored population/outcome exports.
void regenerate_reports(const Scenario& scenario, const std::string& out_dir);

void write_population_csv(const std::string& path, const std::vector<Customer>& population);
std::vector<Customer> read_population_csv(const std::string& path);

extern const char* const kVersion;

}  // namespace dresp
