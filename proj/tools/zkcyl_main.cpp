#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "zkcyl/error.hpp"
#include "zkcyl/runner.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json load_document(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw zkcyl::ConfigError("cannot open config file " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw zkcyl::ConfigError("parse error in " + path + ": " + e.what());
    }
}

std::vector<zkcyl::Leg> parse_legs(const std::vector<std::string>& items) {
    std::vector<zkcyl::Leg> legs;
    for (const auto& item : items) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw zkcyl::ConfigError("leg '" + item + "' is not T_END:N_T");
        try {
            legs.push_back({std::stod(item.substr(0, colon)), std::stol(item.substr(colon + 1))});
        } catch (const std::exception&) {
            throw zkcyl::ConfigError("leg '" + item + "' is not T_END:N_T");
        }
    }
    return legs;
}

int report(const zkcyl::RunReport& r) {
    std::cout << r.summary().dump(2) << "\n";
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cylindrically symmetric generalized Zakharov-Kuznetsov solver"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    bool verbose = false;

    auto* gs = app.add_subcommand("ground-state", "solve for the ground state and write ground_state.zks");
    gs->add_option("-c,--config", config_path, "JSON configuration file");
    gs->add_option("--set", overrides, "override a config entry, e.g. grid.N=1024")->allow_extra_args(false);
    gs->add_flag("-v,--verbose", verbose);

    auto* ev = app.add_subcommand("evolve", "integrate the configured initial data");
    ev->add_option("-c,--config", config_path, "JSON configuration file")->required();
    ev->add_option("--set", overrides, "override a config entry")->allow_extra_args(false);
    ev->add_flag("-v,--verbose", verbose);

    std::string scenario;
    bool list = false;
    auto* sc = app.add_subcommand("scenario", "run a preset experiment");
    sc->add_option("name", scenario, "scenario name");
    sc->add_option("--set", overrides, "override a preset entry")->allow_extra_args(false);
    sc->add_flag("--list", list, "list scenario names");
    sc->add_flag("--print-config", "print the effective configuration and exit");
    sc->add_flag("-v,--verbose", verbose);

    std::string snapshot;
    std::vector<std::string> leg_items;
    std::string out_dir;
    auto* rs = app.add_subcommand("resume", "continue a run from a snapshot");
    rs->add_option("snapshot", snapshot, "snapshot file")->required();
    rs->add_option("--leg", leg_items, "extension leg T_END:N_T (absolute end time); repeatable")
        ->allow_extra_args(false);
    rs->add_option("-o,--out", out_dir, "output directory")->required();
    rs->add_option("--set", overrides, "override an integrator/output/detector entry")->allow_extra_args(false);
    rs->add_flag("-v,--verbose", verbose);

    std::vector<std::string> diag_inputs;
    auto* dg = app.add_subcommand("diag", "recompute diagnostics from snapshots or run directories");
    dg->add_option("inputs", diag_inputs, "snapshot files or run directories")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gs) {
            json doc = load_document(config_path);
            if (!doc.contains("output") || !doc["output"].contains("directory")) {
                doc["output"]["directory"] = "ground_state";
            }
            zkcyl::apply_overrides(doc, overrides);
            const auto config = zkcyl::config_from_json(doc);
            const auto profile = zkcyl::run_ground_state(config, verbose);
            json out = {{"directory", config.directory},
                        {"mass", profile.mass},
                        {"sqrt_mass", std::sqrt(profile.mass)},
                        {"energy", profile.energy},
                        {"residual_norm", profile.residual_norm},
                        {"newton_iterations", profile.newton_iterations}};
            std::cout << out.dump(2) << "\n";
            return zkcyl::exit_success;
        }
        if (*ev) {
            json doc = load_document(config_path);
            zkcyl::apply_overrides(doc, overrides);
            return report(zkcyl::run_evolution(zkcyl::config_from_json(doc), verbose));
        }
        if (*sc) {
            if (list) {
                for (const auto& n : zkcyl::scenario_names()) std::cout << n << "\n";
                return zkcyl::exit_success;
            }
            if (scenario.empty()) throw zkcyl::ConfigError("scenario name required (see --list)");
            if (sc->count("--print-config") > 0) {
                json doc = zkcyl::scenario_preset(scenario);
                zkcyl::apply_overrides(doc, overrides);
                std::cout << zkcyl::to_json(zkcyl::config_from_json(doc)).dump(2) << "\n";
                return zkcyl::exit_success;
            }
            return report(zkcyl::run_scenario(scenario, overrides, verbose));
        }
        if (*rs) {
            return report(zkcyl::resume(snapshot, parse_legs(leg_items), out_dir, overrides, verbose));
        }
        if (*dg) {
            std::vector<fs::path> files;
            for (const auto& in : diag_inputs) {
                if (fs::is_directory(in)) {
                    std::vector<fs::path> found;
                    for (const auto& e : fs::directory_iterator(in)) {
                        if (e.path().extension() == ".zks") found.push_back(e.path());
                    }
                    std::sort(found.begin(), found.end());
                    files.insert(files.end(), found.begin(), found.end());
                } else {
                    files.emplace_back(in);
                }
            }
            zkcyl::write_diagnostics_header(std::cout);
            for (const auto& f : files) zkcyl::write_diagnostics_row(std::cout, zkcyl::diagnose_snapshot(f));
            return zkcyl::exit_success;
        }
    } catch (const zkcyl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return zkcyl::exit_config_error;
    } catch (const zkcyl::SolverFailure& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return zkcyl::exit_solver_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return zkcyl::exit_failure;
    }
    return zkcyl::exit_failure;
}
