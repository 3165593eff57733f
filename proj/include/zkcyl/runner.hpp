#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zkcyl/config.hpp"
#include "zkcyl/diagnostics.hpp"
#include "zkcyl/ground_state.hpp"

namespace zkcyl {

enum ExitCode : int {
    exit_success = 0,
    exit_failure = 1,
    exit_blow_up = 2,
    exit_solver_failure = 3,
    exit_config_error = 4,
};

struct RunReport {
    int exit_code = exit_success;
    StopReason stop = StopReason::Completed;
    std::string message;
    double t_final = 0.0;
    long steps = 0;
    double linf_initial = 0.0;
    double linf_final = 0.0;
    DriftReport drift;
    /// Only for soliton-validate: max |u(t) - Q(x - c t)|.
    double shift_error = -1.0;
    std::vector<DiagnosticsRecord> series;
    std::filesystem::path directory;
    std::filesystem::path last_snapshot;

    nlohmann::json summary() const;
};

DiscretizationPtr make_discretization(const SimConfig& config);

/// Solves for the ground state and writes `ground_state.zks` plus a
/// summary into config.directory.
GroundStateProfile run_ground_state(const SimConfig& config, bool verbose = false);

/// Initial field described by config.initial.
Field initial_field(const SimConfig& config, const DiscretizationPtr& disc);

/// Integrates config.legs from the initial data, writing the run directory.
RunReport run_evolution(const SimConfig& config, bool verbose = false);

/// Scenario names: soliton-validate, perturb-0.99, perturb-1.01,
/// perturb-1.1, gauss-5, gauss-6.5.
const std::vector<std::string>& scenario_names();

/// Preset configuration document for a scenario (before overrides).
nlohmann::json scenario_preset(const std::string& name);

RunReport run_scenario(const std::string& name, const std::vector<std::string>& overrides,
                       bool verbose = false);

/// Continues the run stored in `snapshot_path` through `legs`, writing into
/// `directory` (series appended with continuous t). `overrides` may only
/// touch integrator/output/detector settings; grid changes are refused.
RunReport resume(const std::filesystem::path& snapshot_path, const std::vector<Leg>& legs,
                 const std::filesystem::path& directory, const std::vector<std::string>& overrides = {},
                 bool verbose = false);

/// Recomputes diagnostics for a snapshot.
DiagnosticsRecord diagnose_snapshot(const std::filesystem::path& snapshot_path);

}  // namespace zkcyl
