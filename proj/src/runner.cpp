#include "zkcyl/runner.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "zkcyl/error.hpp"
#include "zkcyl/snapshot.hpp"

namespace zkcyl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* diagnostics_file = "diagnostics.tsv";

std::string snapshot_name(long step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snap_%06ld.zks", step);
    return buf;
}

void write_json(const fs::path& path, const json& doc) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << doc.dump(2) << "\n";
}

int exit_code_for(StopReason stop) {
    switch (stop) {
        case StopReason::Completed: return exit_success;
        case StopReason::BlowUp:
        case StopReason::NonFinite:
        case StopReason::StepFailure: return exit_blow_up;
    }
    return exit_failure;
}

void require_profile(const SimConfig& config) {
    if (config.initial.path.empty() || !fs::exists(config.initial.path)) {
        throw ConfigError("ground-state profile '" + config.initial.path +
                          "' not found; run `zkcyl ground-state` first (its output directory holds "
                          "ground_state.zks) or point initial.path at an existing profile");
    }
}

/// Everything needed to march a run forward and persist it.
struct RunState {
    SimConfig config;
    DiscretizationPtr disc;
    Nonlinearity nl;
    fs::path directory;
    std::vector<DiagnosticsRecord> series;
    std::ofstream diag;
    long step = 0;
    double linf_reference = 0.0;
    fs::path last_snapshot;
    long last_snapshot_step = -1;
    long last_diag_step = -1;

    RunState(SimConfig cfg, DiscretizationPtr d)
        : config(std::move(cfg)), disc(std::move(d)), nl(config.p), directory(config.directory) {}

    void open_series(const std::vector<DiagnosticsRecord>& previous) {
        fs::create_directories(directory);
        write_json(directory / "config.json", to_json(config));
        diag.open(directory / diagnostics_file, std::ios::trunc);
        if (!diag) throw Error("cannot write " + (directory / diagnostics_file).string());
        write_diagnostics_header(diag);
        for (const auto& r : previous) {
            write_diagnostics_row(diag, r);
            series.push_back(r);
        }
        diag.flush();
    }

    void record(double t, const Field& u, int iters) {
        if (last_diag_step == step) return;
        const auto r = make_record(t, u, nl, iters);
        write_diagnostics_row(diag, r);
        diag.flush();
        series.push_back(r);
        last_diag_step = step;
    }

    void snapshot(double t, const Field& u) {
        if (last_snapshot_step == step) return;
        const json meta = {{"step", step}, {"linf_reference", linf_reference}};
        last_snapshot = directory / snapshot_name(step);
        save_snapshot(last_snapshot, make_snapshot(u, t, to_json(config), meta));
        last_snapshot_step = step;
    }
};

/// Runs `legs` from (t0, u0), updating state; returns the final report.
RunReport march(RunState& st, const Field& u0, double t0, const std::vector<Leg>& legs, bool verbose) {
    RunReport report;
    report.directory = st.directory;
    report.linf_initial = st.linf_reference;

    EvolveOptions options;
    options.stage = StageOptions{st.config.newton_tol, st.config.max_newton, st.config.coupling};
    options.detector = BlowUpDetector{st.config.linf_factor, st.config.newton_trigger};
    options.linf_reference = st.linf_reference;
    options.on_step = [&](long, double t, const Field& u, int iters) {
        ++st.step;
        if (st.step % st.config.diagnostic_stride == 0) {
            st.record(t, u, iters);
            if (verbose) {
                const auto& r = st.series.back();
                std::fprintf(stderr, "t=%.6f  linf=%.6e  mass=%.12e  newton=%d\n", r.t, r.linf, r.mass, iters);
            }
        }
        if (st.step % st.config.snapshot_stride == 0) st.snapshot(t, u);
    };

    Field u = u0;
    double t = t0;
    for (const auto& leg : legs) {
        if (leg.t_end <= t) continue;
        options.t0 = t;
        EvolveReport leg_report = evolve(u, leg.t_end, leg.n_steps, st.nl, options);
        u = std::move(leg_report.final_field);
        t = leg_report.t_final;
        report.stop = leg_report.stop;
        report.message = leg_report.message;
        if (leg_report.stop != StopReason::Completed) break;
    }
    st.record(t, u, 0);
    st.snapshot(t, u);

    report.exit_code = exit_code_for(report.stop);
    report.t_final = t;
    report.steps = st.step;
    report.linf_final = linf(u);
    report.series = st.series;
    report.last_snapshot = st.last_snapshot;
    if (st.series.size() >= 2) report.drift = drift_report(st.series);
    if (report.message.empty()) report.message = "completed at t=" + std::to_string(t);
    return report;
}

void finish(const RunReport& report, const fs::path& directory) {
    write_json(directory / "summary.json", report.summary());
}

}  // namespace

json RunReport::summary() const {
    json j = {{"exit_code", exit_code},
              {"stop", to_string(stop)},
              {"message", message},
              {"t_final", t_final},
              {"steps", steps},
              {"linf_initial", linf_initial},
              {"linf_final", linf_final},
              {"mass_drift", drift.mass_drift},
              {"energy_drift", drift.energy_drift},
              {"energy_drift_relative", drift.energy_relative},
              {"drift_flagged", drift.flagged()},
              {"last_snapshot", last_snapshot.filename().string()}};
    j["shift_error"] = shift_error >= 0.0 ? json(shift_error) : json(nullptr);
    return j;
}

DiscretizationPtr make_discretization(const SimConfig& config) {
    return make_discretization(make_torus_grid(config.L, config.N),
                               build_layout(config.rho0, config.rho1, config.N_I, config.N_II));
}

GroundStateProfile run_ground_state(const SimConfig& config, bool verbose) {
    const auto disc = make_discretization(config);
    GroundStateOptions options;
    options.tol = config.ground_state_tol;
    options.accept_tol = std::max(options.accept_tol, config.ground_state_tol);
    options.verbose = verbose;
    const Field seed = gaussian_data(disc, config.seed_amplitude, 1.0);
    GroundStateProfile profile = solve_ground_state(seed, config.c, config.p, options);

    const fs::path dir(config.directory);
    fs::create_directories(dir);
    write_json(dir / "config.json", to_json(config));
    const json meta = {{"kind", "ground-state"},
                       {"c", profile.c},
                       {"p", profile.p.str()},
                       {"residual_norm", profile.residual_norm},
                       {"mass", profile.mass},
                       {"energy", profile.energy},
                       {"newton_iterations", profile.newton_iterations},
                       {"gmres_iterations", profile.gmres_iterations}};
    save_snapshot(dir / "ground_state.zks", make_snapshot(profile.field, 0.0, to_json(config), meta));
    json summary = meta;
    summary["linf"] = linf(profile.field);
    summary["sqrt_mass"] = std::sqrt(profile.mass);
    write_json(dir / "summary.json", summary);
    return profile;
}

Field initial_field(const SimConfig& config, const DiscretizationPtr& disc) {
    switch (config.initial.kind) {
        case InitialKind::Gaussian:
            return gaussian_data(disc, config.initial.lambda, config.initial.alpha);
        case InitialKind::GroundState:
        case InitialKind::ScaledGroundState: {
            require_profile(config);
            const Snapshot snap = load_snapshot(config.initial.path);
            const json& meta = snap.header.value("meta", json::object());
            if (meta.contains("p") && Rational::parse(meta.at("p").get<std::string>()) != config.p) {
                throw ConfigError("profile was computed for p=" + meta.at("p").get<std::string>() +
                                  " but physics.p=" + config.p.str());
            }
            if (meta.contains("c") && meta.at("c").get<double>() != config.c) {
                throw ConfigError("profile was computed for c=" + std::to_string(meta.at("c").get<double>()) +
                                  " but physics.c=" + std::to_string(config.c));
            }
            const auto stored = discretization_from_snapshot(snap);
            Field q = field_from_snapshot(snap, stored);
            if (stored->nx() != disc->nx()) q = resample_x(q, disc);
            else q = Field(disc, std::move(q.values));
            if (!metadata_diff(snap, *disc).empty() && stored->nx() == disc->nx()) {
                throw ShapeError("profile layout does not match the run configuration");
            }
            if (config.initial.kind == InitialKind::ScaledGroundState) return scale_data(q, config.initial.lambda);
            return q;
        }
        case InitialKind::File: {
            const Snapshot snap = load_snapshot(config.initial.path);
            return field_from_snapshot(snap, disc);
        }
    }
    throw ConfigError("unknown initial data kind");
}

RunReport run_evolution(const SimConfig& config, bool verbose) {
    const auto disc = make_discretization(config);
    const Field u0 = initial_field(config, disc);
    RunState st(config, disc);
    st.linf_reference = linf(u0);
    st.open_series({});
    st.record(0.0, u0, 0);
    st.snapshot(0.0, u0);

    RunReport report = march(st, u0, 0.0, config.legs, verbose);
    if (config.initial.kind == InitialKind::GroundState && report.stop == StopReason::Completed) {
        // a traveling wave: compare with the exactly translated profile
        const Field moved = shift_in_x(u0, config.c * report.t_final);
        const Field last = field_from_snapshot(load_snapshot(report.last_snapshot), disc);
        report.shift_error = (last.values - moved.values).cwiseAbs().maxCoeff();
    }
    finish(report, st.directory);
    return report;
}

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"soliton-validate", "perturb-0.99", "perturb-1.01",
                                                "perturb-1.1",      "gauss-5",      "gauss-6.5"};
    return names;
}

json scenario_preset(const std::string& name) {
    auto legs = [](std::initializer_list<std::pair<double, long>> items) {
        json a = json::array();
        for (const auto& [t, n] : items) a.push_back({{"t_end", t}, {"N_t", n}});
        return a;
    };
    const std::string profile = "ground_state/ground_state.zks";
    json doc = {{"grid", {{"L", 5.0}, {"N", 512}}},
                {"layout", {{"rho0", 1.0}, {"rho1", 20.0}, {"N_I", 20}, {"N_II", 100}}},
                {"physics", {{"p", "7/3"}, {"c", 1.0}}},
                {"output", {{"directory", name}}}};
    if (name == "soliton-validate") {
        doc["integrator"] = {{"legs", legs({{1.0, 400}})}};
        doc["initial"] = {{"kind", "ground-state"}, {"path", profile}};
        doc["output"]["snapshot_stride"] = 100;
        doc["output"]["diagnostic_stride"] = 10;
    } else if (name == "perturb-0.99") {
        doc["integrator"] = {{"legs", legs({{10.0, 1000}})}};
        doc["initial"] = {{"kind", "scaled-ground-state"}, {"lambda", 0.99}, {"path", profile}};
    } else if (name == "perturb-1.01") {
        doc["integrator"] = {{"legs", legs({{20.0, 2000}, {50.0, 3000}})}};
        doc["initial"] = {{"kind", "scaled-ground-state"}, {"lambda", 1.01}, {"path", profile}};
    } else if (name == "perturb-1.1") {
        doc["grid"]["N"] = 4096;
        doc["integrator"] = {{"legs", legs({{4.0, 1000}, {4.5, 1000}})}};
        doc["initial"] = {{"kind", "scaled-ground-state"}, {"lambda", 1.1}, {"path", profile}};
    } else if (name == "gauss-5") {
        doc["grid"]["N"] = 1024;
        doc["integrator"] = {{"legs", legs({{10.0, 1000}})}};
        doc["initial"] = {{"kind", "gaussian"}, {"lambda", 5.0}, {"alpha", 1.0}};
    } else if (name == "gauss-6.5") {
        doc["grid"]["N"] = 4096;
        doc["integrator"] = {{"legs", legs({{0.75, 1000}, {0.85, 1000}})}};
        doc["initial"] = {{"kind", "gaussian"}, {"lambda", 6.5}, {"alpha", 1.0}};
    } else {
        std::string known;
        for (const auto& n : scenario_names()) known += " " + n;
        throw ConfigError("unknown scenario '" + name + "'; known:" + known);
    }
    if (!doc["output"].contains("snapshot_stride")) {
        doc["output"]["snapshot_stride"] = 100;
        doc["output"]["diagnostic_stride"] = 10;
    }
    return doc;
}

RunReport run_scenario(const std::string& name, const std::vector<std::string>& overrides, bool verbose) {
    json doc = scenario_preset(name);
    apply_overrides(doc, overrides);
    return run_evolution(config_from_json(doc), verbose);
}

RunReport resume(const fs::path& snapshot_path, const std::vector<Leg>& legs, const fs::path& directory,
                 const std::vector<std::string>& overrides, bool verbose) {
    const Snapshot snap = load_snapshot(snapshot_path);
    if (!snap.header.contains("config")) throw FormatError("snapshot carries no run configuration");
    json doc = snap.header.at("config");
    apply_overrides(doc, overrides);
    doc["output"]["directory"] = directory.string();
    if (!legs.empty()) {
        json a = json::array();
        for (const auto& leg : legs) a.push_back({{"t_end", leg.t_end}, {"N_t", leg.n_steps}});
        doc["integrator"]["legs"] = a;
    }
    SimConfig config = config_from_json(doc);
    const auto disc = make_discretization(config);
    const auto diff = metadata_diff(snap, *disc);
    if (!diff.empty()) {
        std::string msg = "refusing to resume on a different grid/layout:";
        for (const auto& d : diff) msg += "\n  " + d;
        throw ConfigError(msg);
    }
    const Field u0 = field_from_snapshot(snap, disc);
    const double t0 = snap.t();
    const json meta = snap.header.value("meta", json::object());

    // carry the series of the originating run up to t0
    std::vector<DiagnosticsRecord> previous;
    const fs::path source_series = snapshot_path.parent_path() / diagnostics_file;
    if (fs::exists(source_series)) {
        std::ifstream in(source_series);
        for (const auto& r : read_diagnostics(in)) {
            if (r.t <= t0) previous.push_back(r);
        }
    }

    RunState st(config, disc);
    st.step = meta.value("step", 0L);
    st.linf_reference = meta.value("linf_reference", linf(u0));
    st.open_series(previous);
    if (previous.empty() || previous.back().t != t0) st.record(t0, u0, 0);
    st.last_diag_step = st.step;

    bool extends = false;
    for (const auto& leg : config.legs) extends = extends || leg.t_end > t0;
    if (legs.empty() || !extends) {
        // nothing to integrate: re-save the snapshot unchanged
        RunReport report;
        report.directory = st.directory;
        report.t_final = t0;
        report.steps = st.step;
        report.linf_initial = st.linf_reference;
        report.linf_final = linf(u0);
        report.series = st.series;
        report.message = "zero-length extension; nothing to do";
        report.last_snapshot = st.directory / snapshot_name(st.step);
        save_snapshot(report.last_snapshot, snap);
        if (report.series.size() >= 2) report.drift = drift_report(report.series);
        finish(report, st.directory);
        return report;
    }

    st.last_snapshot_step = st.step;
    RunReport report = march(st, u0, t0, config.legs, verbose);
    finish(report, st.directory);
    return report;
}

DiagnosticsRecord diagnose_snapshot(const fs::path& snapshot_path) {
    const Snapshot snap = load_snapshot(snapshot_path);
    Rational p{7, 3};
    if (snap.header.contains("config")) {
        const json& cfg = snap.header.at("config");
        if (cfg.contains("physics") && cfg.at("physics").contains("p")) {
            p = Rational::parse(cfg.at("physics").at("p").get<std::string>());
        }
    }
    const auto disc = discretization_from_snapshot(snap);
    const Field field = field_from_snapshot(snap, disc);
    return make_record(snap.t(), field, Nonlinearity(p));
}

}  // namespace zkcyl
