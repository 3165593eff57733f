#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <fstream>
#include <optional>

#include "zkcyl/diagnostics.hpp"
#include "zkcyl/error.hpp"
#include "zkcyl/gauss2.hpp"
#include "zkcyl/ground_state.hpp"
#include "zkcyl/runner.hpp"
#include "zkcyl/snapshot.hpp"

namespace py = pybind11;
using namespace zkcyl;

namespace {

using Values = Eigen::Ref<const RealMatrix>;

Field to_field(const DiscretizationPtr& disc, const Values& values) {
    if (values.rows() != disc->nx() || values.cols() != disc->nr()) {
        throw ShapeError("expected an array of shape (" + std::to_string(disc->nx()) + ", " +
                         std::to_string(disc->nr()) + ")");
    }
    return Field(disc, RealMatrix(values));
}

DiscretizationPtr discretization(double L, int N, double rho0, double rho1, int n_inner, int n_outer) {
    return make_discretization(make_torus_grid(L, N), build_layout(rho0, rho1, n_inner, n_outer));
}

py::dict report_dict(const RunReport& r) {
    py::dict d;
    d["exit_code"] = r.exit_code;
    d["stop"] = to_string(r.stop);
    d["message"] = r.message;
    d["t_final"] = r.t_final;
    d["steps"] = r.steps;
    d["linf_initial"] = r.linf_initial;
    d["linf_final"] = r.linf_final;
    d["mass_drift"] = r.drift.mass_drift;
    d["energy_drift"] = r.drift.energy_drift;
    d["shift_error"] = r.shift_error < 0.0 ? py::object(py::none()) : py::object(py::float_(r.shift_error));
    d["directory"] = r.directory;
    d["last_snapshot"] = r.last_snapshot;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spectral solver for the cylindrically symmetric generalized Zakharov-Kuznetsov equation";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
    py::register_exception<ShapeError>(m, "ShapeError", error.ptr());
    py::register_exception<DomainError>(m, "DomainError", error.ptr());
    py::register_exception<SolverFailure>(m, "SolverFailure", error.ptr());
    py::register_exception<StepFailure>(m, "StepFailure", error.ptr());
    py::register_exception<FormatError>(m, "FormatError", error.ptr());

    py::class_<Discretization, std::shared_ptr<Discretization>>(m, "Discretization")
        .def(py::init([](double L, int N, double rho0, double rho1, int n_inner, int n_outer) {
                 return std::const_pointer_cast<Discretization>(discretization(L, N, rho0, rho1, n_inner, n_outer));
             }),
             py::arg("L") = 5.0, py::arg("N") = 512, py::arg("rho0") = 1.0, py::arg("rho1") = 20.0,
             py::arg("N_I") = 20, py::arg("N_II") = 100)
        .def_property_readonly("L", [](const Discretization& d) { return d.grid().L; })
        .def_property_readonly("N", [](const Discretization& d) { return d.grid().N; })
        .def_property_readonly("shape", [](const Discretization& d) { return py::make_tuple(d.nx(), d.nr()); })
        .def_property_readonly("x", [](const Discretization& d) { return d.grid().nodes; })
        .def_property_readonly("rho", [](const Discretization& d) { return d.layout().physical_rho(); })
        .def_property_readonly("quad_weights", [](const Discretization& d) { return d.layout().quad_weights(); })
        .def_property_readonly("interface_indices",
                               [](const Discretization& d) {
                                   return py::make_tuple(d.layout().inner_interface_index(),
                                                         d.layout().outer_interface_index());
                               })
        .def("__repr__", [](const Discretization& d) {
            return "Discretization(L=" + std::to_string(d.grid().L) + ", N=" + std::to_string(d.grid().N) +
                   ", N_I=" + std::to_string(d.layout().n_inner()) +
                   ", N_II=" + std::to_string(d.layout().n_outer()) + ")";
        });

    m.def("gaussian", [](const std::shared_ptr<Discretization>& d, double lam, double alpha) {
        return gaussian_data(d, lam, alpha).values;
    }, py::arg("disc"), py::arg("lam"), py::arg("alpha") = 1.0);

    m.def("mass", [](const std::shared_ptr<Discretization>& d, const Values& v) { return mass(to_field(d, v)); });
    m.def("energy", [](const std::shared_ptr<Discretization>& d, const Values& v, const std::string& p) {
        return energy(to_field(d, v), Nonlinearity(Rational::parse(p)));
    }, py::arg("disc"), py::arg("values"), py::arg("p") = "7/3");
    m.def("linf", [](const std::shared_ptr<Discretization>& d, const Values& v) { return linf(to_field(d, v)); });
    m.def("energy_mass_ratio", [](const std::string& p) { return energy_mass_ratio(Rational::parse(p)); });

    m.def("cheb_tails", [](const std::shared_ptr<Discretization>& d, const Values& v, double fraction) {
        const auto t = cheb_tails(to_field(d, v), fraction);
        return py::make_tuple(t.inner, t.outer);
    }, py::arg("disc"), py::arg("values"), py::arg("fraction") = 0.1);
    m.def("cheb_profile_coefficients", [](const std::shared_ptr<Discretization>& d, const Values& v, int n,
                                          bool inner) { return cheb_profile_coefficients(to_field(d, v), n, inner); });

    m.def("cone_half_angle", [](const std::shared_ptr<Discretization>& d, const Values& v, double level) {
        const auto c = cone_half_angle(to_field(d, v), level);
        py::dict out;
        out["radiation"] = c.radiation;
        out["degrees"] = c.degrees;
        out["x_peak"] = c.x_peak;
        out["core_radius"] = c.core_radius;
        out["points"] = c.points;
        return out;
    });

    m.def("ground_state", [](const std::shared_ptr<Discretization>& d, double c, const std::string& p,
                             double seed_amplitude) {
        const Rational power = Rational::parse(p);
        std::optional<GroundStateProfile> result;
        {
            py::gil_scoped_release release;
            result = solve_ground_state(gaussian_data(d, seed_amplitude, 1.0), c, power);
        }
        const GroundStateProfile& q = *result;
        py::dict out;
        out["values"] = q.field.values;
        out["mass"] = q.mass;
        out["energy"] = q.energy;
        out["residual_norm"] = q.residual_norm;
        out["newton_iterations"] = q.newton_iterations;
        return out;
    }, py::arg("disc"), py::arg("c") = 1.0, py::arg("p") = "7/3", py::arg("seed_amplitude") = 3.0);

    m.def("evolve", [](const std::shared_ptr<Discretization>& d, const Values& v, double t_end, long n_steps,
                       const std::string& p, double t0) {
        EvolveOptions o;
        o.t0 = t0;
        const Field u0 = to_field(d, v);
        const Nonlinearity nl(Rational::parse(p));
        std::optional<EvolveReport> result;
        {
            py::gil_scoped_release release;
            result = evolve(u0, t_end, n_steps, nl, o);
        }
        const EvolveReport& r = *result;
        py::dict out;
        out["values"] = r.final_field.values;
        out["t_final"] = r.t_final;
        out["steps"] = r.steps_taken;
        out["stop"] = to_string(r.stop);
        out["message"] = r.message;
        out["max_iterations"] = r.max_iterations;
        return out;
    }, py::arg("disc"), py::arg("values"), py::arg("t_end"), py::arg("n_steps"), py::arg("p") = "7/3",
       py::arg("t0") = 0.0);

    m.def("shift_in_x", [](const std::shared_ptr<Discretization>& d, const Values& v, double distance) {
        return shift_in_x(to_field(d, v), distance).values;
    });

    // snapshots: headers cross the boundary as JSON text
    m.def("_load_snapshot", [](const std::filesystem::path& path) {
        const Snapshot s = load_snapshot(path);
        const auto disc = discretization_from_snapshot(s);
        return py::make_tuple(s.header.dump(), std::const_pointer_cast<Discretization>(disc),
                              field_from_snapshot(s, disc).values);
    });
    m.def("_save_snapshot", [](const std::filesystem::path& path, const std::shared_ptr<Discretization>& d,
                               const Values& v, double t, const std::string& meta) {
        save_snapshot(path, make_snapshot(to_field(d, v), t, nullptr,
                                          meta.empty() ? nlohmann::json(nullptr) : nlohmann::json::parse(meta)));
    });
    m.def("_read_diagnostics", [](const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw Error("cannot open " + path.string());
        const auto rows = read_diagnostics(in);
        RealMatrix table(static_cast<Eigen::Index>(rows.size()), 8);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            table.row(static_cast<Eigen::Index>(i)) << r.t, r.mass, r.energy, r.linf, r.fourier_tail, r.cheb_tail_I,
                r.cheb_tail_II, r.newton_iters;
        }
        return table;
    });

    m.def("scenario_names", &scenario_names);
    m.def("_scenario_preset", [](const std::string& name) { return scenario_preset(name).dump(); });
    m.def("run_scenario", [](const std::string& name, const std::vector<std::string>& overrides) {
        RunReport r;
        {
            py::gil_scoped_release release;
            r = run_scenario(name, overrides);
        }
        return report_dict(r);
    }, py::arg("name"), py::arg("overrides") = std::vector<std::string>{});
    m.def("_run_config", [](const std::string& doc) {
        const SimConfig config = config_from_json(nlohmann::json::parse(doc));
        RunReport r;
        {
            py::gil_scoped_release release;
            r = run_evolution(config);
        }
        return report_dict(r);
    });
    m.def("_run_ground_state", [](const std::string& doc) {
        const SimConfig config = config_from_json(nlohmann::json::parse(doc));
        py::gil_scoped_release release;
        const auto q = run_ground_state(config);
        return std::make_tuple(q.mass, q.energy, q.residual_norm);
    });
    m.def("resume", [](const std::filesystem::path& snapshot, const std::vector<std::pair<double, long>>& legs,
                       const std::filesystem::path& directory, const std::vector<std::string>& overrides) {
        std::vector<Leg> l;
        for (const auto& [t, n] : legs) l.push_back(Leg{t, n});
        RunReport r;
        {
            py::gil_scoped_release release;
            r = resume(snapshot, l, directory, overrides);
        }
        return report_dict(r);
    }, py::arg("snapshot"), py::arg("legs"), py::arg("directory"),
       py::arg("overrides") = std::vector<std::string>{});
}
