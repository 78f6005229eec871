#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dresp/scenario.hpp"

namespace {

std::vector<std::string> split_models(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

dresp::Scenario load_with_overrides(const std::string& config, const std::string& models,
                                    bool seed_set, uint64_t seed, const std::string& out,
                                    const std::string& exec, bool dump_matrices) {
    dresp::Scenario s = dresp::load_scenario(config);
    if (!models.empty()) {
        std::set<dresp::PemModel> wanted;
        for (const std::string& name : split_models(models)) {
            if (name == "pem") {
                wanted.insert(dresp::PemModel::pem);
            } else if (name == "dpem") {
                wanted.insert(dresp::PemModel::dpem);
            } else if (name == "spem") {
                wanted.insert(dresp::PemModel::spem);
            } else {
                throw dresp::ValidationError("--models: unknown model '" + name + "'");
            }
        }
        s.model_set.clear();
        for (dresp::PemModel m :
             {dresp::PemModel::pem, dresp::PemModel::dpem, dresp::PemModel::spem}) {
            if (wanted.count(m)) s.model_set.push_back(m);
        }
        if (s.model_set.empty()) {
            throw dresp::ValidationError("--models: model set must be non-empty");
        }
    }
    if (seed_set) s.seed = seed;
    if (!out.empty()) s.output_dir = out;
    if (!exec.empty()) {
        if (exec == "serial") {
            s.exec = dresp::ExecMode::serial;
        } else if (exec == "parallel") {
            s.exec = dresp::ExecMode::parallel;
        } else {
            throw dresp::ValidationError("--exec: must be serial or parallel");
        }
    }
    if (dump_matrices) s.dump_matrices = true;
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Demand-response simulation under real-time pricing"};
    app.require_subcommand(1);

    std::string config;
    std::string models;
    std::string out;
    std::string exec;
    uint64_t seed = 0;
    bool dump_matrices = false;

    CLI::App* validate = app.add_subcommand("validate", "Check a scenario and its fixtures");
    validate->add_option("--config", config, "scenario JSON")->required();

    CLI::App* run = app.add_subcommand("run", "Run a scenario end to end");
    run->add_option("--config", config, "scenario JSON")->required();
    CLI::Option* seed_opt = run->add_option("--seed", seed, "override the master seed");
    run->add_option("--models", models, "comma-separated subset of pem,dpem,spem");
    run->add_option("--out", out, "output directory");
    run->add_option("--exec", exec, "serial or parallel");
    run->add_flag("--dump-matrices", dump_matrices, "export per-customer elasticity matrices");

    CLI::App* report = app.add_subcommand("report", "Regenerate report CSVs from stored outcomes");
    report->add_option("--config", config, "scenario JSON")->required();
    report->add_option("--out", out, "output directory holding the stored outcomes");
    report->add_option("--models", models, "comma-separated subset of pem,dpem,spem");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            const auto diags = dresp::validate_fixture(config, "scenario");
            for (const dresp::Diagnostic& d : diags) {
                std::cerr << d.file;
                if (d.line > 0) std::cerr << ":" << d.line;
                std::cerr << ": " << d.message << '\n';
            }
            if (!diags.empty()) return 1;
            std::cout << "ok: scenario and fixtures are usable\n";
            return 0;
        }
        if (run->parsed()) {
            const dresp::Scenario s =
                load_with_overrides(config, models, seed_opt->count() > 0, seed, out, exec,
                                    dump_matrices);
            const dresp::RunManifest manifest = dresp::run_scenario(s);
            std::cout << "run complete: " << s.output_dir << " ("
                      << manifest.wall_clock_seconds << " s)\n";
            return 0;
        }
        if (report->parsed()) {
            dresp::Scenario s =
                load_with_overrides(config, models, false, 0, out, "", false);
            dresp::regenerate_reports(s, s.output_dir);
            std::cout << "reports regenerated in " << s.output_dir << '\n';
            return 0;
        }
    } catch (const dresp::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
