#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zkcyl/gauss2.hpp"
#include "zkcyl/rational.hpp"

namespace zkcyl {

struct Leg {
    double t_end = 1.0;
    long n_steps = 400;
};

enum class InitialKind { GroundState, ScaledGroundState, Gaussian, File };

struct InitialSpec {
    InitialKind kind = InitialKind::GroundState;
    double lambda = 1.0;
    double alpha = 1.0;
    /// Ground-state profile or arbitrary field snapshot.
    std::string path;
};

struct SimConfig {
    // grid
    double L = 5.0;
    int N = 512;
    // layout
    double rho0 = 1.0;
    double rho1 = 20.0;
    int N_I = 20;
    int N_II = 100;
    // physics
    Rational p{7, 3};
    double c = 1.0;
    // integrator
    std::vector<Leg> legs{Leg{1.0, 400}};
    double newton_tol = 1e-6;
    int max_newton = 50;
    StageCoupling coupling = StageCoupling::Coupled;
    // initial data
    InitialSpec initial;
    // output
    std::string directory = "run";
    long snapshot_stride = 100;
    long diagnostic_stride = 10;
    // detector
    double linf_factor = 10.0;
    int newton_trigger = 10;
    // ground-state solve
    double seed_amplitude = 3.0;
    double ground_state_tol = 1e-10;
};

/// Validates every field; throws ConfigError naming the offending path.
void validate(const SimConfig& config);

nlohmann::json to_json(const SimConfig& config);

/// Fills defaults for absent keys, rejects unknown keys, validates.
SimConfig config_from_json(const nlohmann::json& j);

SimConfig load_config(const std::filesystem::path& path);

/// Applies "a.b.c=value" overrides (value parsed as JSON, else string)
/// to a config document before it is read.
void apply_overrides(nlohmann::json& doc, const std::vector<std::string>& overrides);

std::string to_string(StageCoupling coupling);
std::string to_string(InitialKind kind);

}  // namespace zkcyl
