#include "zkcyl/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "zkcyl/error.hpp"

namespace zkcyl {

using nlohmann::json;

std::string to_string(StageCoupling coupling) {
    return coupling == StageCoupling::Sweep ? "sweep" : "coupled";
}

std::string to_string(InitialKind kind) {
    switch (kind) {
        case InitialKind::GroundState: return "ground-state";
        case InitialKind::ScaledGroundState: return "scaled-ground-state";
        case InitialKind::Gaussian: return "gaussian";
        case InitialKind::File: return "file";
    }
    return "unknown";
}

namespace {

void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

void require(bool ok, const std::string& path, const std::string& what) {
    if (!ok) fail(path, what);
}

/// Checks that `obj` is an object whose keys are all in `allowed`.
void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
    }
}

template <typename T>
void read(const json& obj, const std::string& section, const char* key, T& target) {
    if (!obj.contains(key)) return;
    const std::string path = section + "." + key;
    try {
        target = obj.at(key).get<T>();
    } catch (const json::exception&) {
        fail(path, "wrong type");
    }
}

}  // namespace

void validate(const SimConfig& c) {
    require(c.L > 0.0, "grid.L", "must be positive");
    require(c.N >= 4 && (c.N & (c.N - 1)) == 0, "grid.N", "must be a power of two >= 4");
    require(c.rho0 > 0.0, "layout.rho0", "must be positive");
    require(c.rho1 > c.rho0, "layout.rho1", "must exceed layout.rho0");
    require(c.N_I >= 4, "layout.N_I", "must be >= 4");
    require(c.N_II >= 4, "layout.N_II", "must be >= 4");
    require(c.p.has_odd_denominator(), "physics.p", "denominator must be odd");
    require(c.p.value() > 1.0, "physics.p", "must exceed 1");
    require(c.c > 0.0, "physics.c", "must be positive");
    require(!c.legs.empty(), "integrator.legs", "needs at least one leg");
    for (std::size_t i = 0; i < c.legs.size(); ++i) {
        const std::string path = "integrator.legs[" + std::to_string(i) + "]";
        require(c.legs[i].n_steps >= 1, path + ".N_t", "must be >= 1");
        const double start = i == 0 ? 0.0 : c.legs[i - 1].t_end;
        require(c.legs[i].t_end > start, path + ".t_end", "legs must advance in time");
    }
    require(c.newton_tol > 0.0, "integrator.newton_tol", "must be positive");
    require(c.max_newton >= 1, "integrator.max_newton", "must be >= 1");
    require(c.initial.alpha > 0.0, "initial.alpha", "must be positive");
    require(c.initial.kind != InitialKind::File || !c.initial.path.empty(), "initial.path",
            "required for file initial data");
    require(c.snapshot_stride >= 0, "output.snapshot_stride", "must be >= 0");
    require(c.diagnostic_stride >= 1, "output.diagnostic_stride", "must be >= 1");
    require(c.linf_factor > 1.0, "detector.linf_factor", "must exceed 1");
    require(c.newton_trigger >= 0, "detector.newton_trigger", "must be >= 0");
    require(c.seed_amplitude > 0.0, "ground_state.seed_amplitude", "must be positive");
    require(c.ground_state_tol > 0.0, "ground_state.tol", "must be positive");
}

json to_json(const SimConfig& c) {
    json legs = json::array();
    for (const auto& leg : c.legs) legs.push_back({{"t_end", leg.t_end}, {"N_t", leg.n_steps}});
    json initial = {{"kind", to_string(c.initial.kind)}, {"lambda", c.initial.lambda}, {"alpha", c.initial.alpha}};
    if (!c.initial.path.empty()) initial["path"] = c.initial.path;
    return {
        {"grid", {{"L", c.L}, {"N", c.N}}},
        {"layout", {{"rho0", c.rho0}, {"rho1", c.rho1}, {"N_I", c.N_I}, {"N_II", c.N_II}}},
        {"physics", {{"p", c.p.str()}, {"c", c.c}}},
        {"integrator",
         {{"legs", legs},
          {"newton_tol", c.newton_tol},
          {"max_newton", c.max_newton},
          {"coupling", to_string(c.coupling)}}},
        {"initial", initial},
        {"output",
         {{"directory", c.directory},
          {"snapshot_stride", c.snapshot_stride},
          {"diagnostic_stride", c.diagnostic_stride}}},
        {"detector", {{"linf_factor", c.linf_factor}, {"newton_trigger", c.newton_trigger}}},
        {"ground_state", {{"seed_amplitude", c.seed_amplitude}, {"tol", c.ground_state_tol}}},
    };
}

SimConfig config_from_json(const json& j) {
    check_keys(j, "", {"grid", "layout", "physics", "integrator", "initial", "output", "detector", "ground_state"});
    SimConfig c;
    const json empty = json::object();
    auto section = [&](const char* name, const std::set<std::string>& keys) -> const json& {
        if (!j.contains(name)) return empty;
        check_keys(j.at(name), name, keys);
        return j.at(name);
    };

    const json& grid = section("grid", {"L", "N"});
    read(grid, "grid", "L", c.L);
    read(grid, "grid", "N", c.N);

    const json& layout = section("layout", {"rho0", "rho1", "N_I", "N_II"});
    read(layout, "layout", "rho0", c.rho0);
    read(layout, "layout", "rho1", c.rho1);
    read(layout, "layout", "N_I", c.N_I);
    read(layout, "layout", "N_II", c.N_II);

    const json& physics = section("physics", {"p", "c"});
    if (physics.contains("p")) {
        const json& p = physics.at("p");
        if (p.is_string()) {
            c.p = Rational::parse(p.get<std::string>());
        } else if (p.is_number_integer()) {
            c.p = Rational(p.get<std::int64_t>());
        } else {
            fail("physics.p", "must be an integer or a string like \"7/3\"");
        }
    }
    read(physics, "physics", "c", c.c);

    const json& integ = section("integrator", {"legs", "t_end", "N_t", "newton_tol", "max_newton", "coupling"});
    if (integ.contains("legs") && (integ.contains("t_end") || integ.contains("N_t"))) {
        fail("integrator", "give either legs or t_end/N_t, not both");
    }
    if (integ.contains("legs")) {
        const json& legs = integ.at("legs");
        if (!legs.is_array()) fail("integrator.legs", "expected an array");
        c.legs.clear();
        for (std::size_t i = 0; i < legs.size(); ++i) {
            const std::string path = "integrator.legs[" + std::to_string(i) + "]";
            check_keys(legs[i], path, {"t_end", "N_t"});
            if (!legs[i].contains("t_end") || !legs[i].contains("N_t")) fail(path, "needs t_end and N_t");
            Leg leg;
            read(legs[i], path, "t_end", leg.t_end);
            read(legs[i], path, "N_t", leg.n_steps);
            c.legs.push_back(leg);
        }
    } else if (integ.contains("t_end") || integ.contains("N_t")) {
        Leg leg = c.legs.front();
        read(integ, "integrator", "t_end", leg.t_end);
        read(integ, "integrator", "N_t", leg.n_steps);
        c.legs = {leg};
    }
    read(integ, "integrator", "newton_tol", c.newton_tol);
    read(integ, "integrator", "max_newton", c.max_newton);
    if (integ.contains("coupling")) {
        std::string s;
        read(integ, "integrator", "coupling", s);
        if (s == "sweep") {
            c.coupling = StageCoupling::Sweep;
        } else if (s == "coupled") {
            c.coupling = StageCoupling::Coupled;
        } else {
            fail("integrator.coupling", "must be \"sweep\" or \"coupled\"");
        }
    }

    const json& initial = section("initial", {"kind", "lambda", "alpha", "path"});
    if (initial.contains("kind")) {
        std::string kind;
        read(initial, "initial", "kind", kind);
        if (kind == "ground-state") {
            c.initial.kind = InitialKind::GroundState;
        } else if (kind == "scaled-ground-state") {
            c.initial.kind = InitialKind::ScaledGroundState;
        } else if (kind == "gaussian") {
            c.initial.kind = InitialKind::Gaussian;
        } else if (kind == "file") {
            c.initial.kind = InitialKind::File;
        } else {
            fail("initial.kind", "unknown kind '" + kind + "'");
        }
    }
    read(initial, "initial", "lambda", c.initial.lambda);
    read(initial, "initial", "alpha", c.initial.alpha);
    read(initial, "initial", "path", c.initial.path);

    const json& output = section("output", {"directory", "snapshot_stride", "diagnostic_stride"});
    read(output, "output", "directory", c.directory);
    read(output, "output", "snapshot_stride", c.snapshot_stride);
    read(output, "output", "diagnostic_stride", c.diagnostic_stride);

    const json& detector = section("detector", {"linf_factor", "newton_trigger"});
    read(detector, "detector", "linf_factor", c.linf_factor);
    read(detector, "detector", "newton_trigger", c.newton_trigger);

    const json& gs = section("ground_state", {"seed_amplitude", "tol"});
    read(gs, "ground_state", "seed_amplitude", c.seed_amplitude);
    read(gs, "ground_state", "tol", c.ground_state_tol);

    validate(c);
    return c;
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("parse error in " + path.string() + ": " + e.what());
    }
    return config_from_json(doc);
}

void apply_overrides(json& doc, const std::vector<std::string>& overrides) {
    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("override '" + item + "' is not of the form key.path=value");
        }
        const std::string key = item.substr(0, eq);
        const std::string text = item.substr(eq + 1);
        json value;
        try {
            value = json::parse(text);
        } catch (const json::parse_error&) {
            value = text;
        }
        std::string pointer = "/" + key;
        for (auto& ch : pointer) {
            if (ch == '.') ch = '/';
        }
        doc[json::json_pointer(pointer)] = value;
    }
}

}  // namespace zkcyl
