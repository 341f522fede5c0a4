#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "catvortex/config.hpp"
#include "catvortex/errors.hpp"
#include "catvortex/exact_states.hpp"
#include "catvortex/experiments.hpp"
#include "catvortex/geometry.hpp"
#include "catvortex/nbody.hpp"
#include "catvortex/reduction.hpp"

namespace py = pybind11;
using namespace catvortex;

namespace {

VortexSystem make_system(const std::vector<double>& gammas, const std::vector<double>& v,
                         const std::vector<double>& u, double a) {
    if (v.size() != gammas.size() || u.size() != gammas.size()) {
        throw std::invalid_argument("gammas, v and u must have the same length");
    }
    VortexSystem s;
    s.params = CatenoidParams(a);
    s.circulations = gammas;
    for (std::size_t i = 0; i < v.size(); ++i) s.positions.push_back({v[i], u[i]});
    return s;
}

ScenarioConfig make_config(const std::string& scenario, const py::dict& overrides) {
    ScenarioConfig cfg = default_config(parse_scenario(scenario));
    for (const auto& [k, val] : overrides) {
        const auto key = py::str(k).cast<std::string>();
        apply_setting(cfg, key, py::str(val).cast<std::string>());
    }
    cfg.validate();
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Point-vortex dynamics on a catenoid";

    auto base = py::register_exception<VortexError>(m, "VortexError", PyExc_RuntimeError);
    py::register_exception<CollisionError>(m, "CollisionError", base.ptr());
    py::register_exception<StepFailure>(m, "StepFailure", base.ptr());
    py::register_exception<NoRootError>(m, "NoRootError", base.ptr());
    py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());
    py::register_exception<InadmissibleError>(m, "InadmissibleError", base.ptr());
    py::register_exception<PerturbationTooLarge>(m, "PerturbationTooLarge", base.ptr());
    py::register_exception<WindowEmpty>(m, "WindowEmpty", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    m.def("conformal_factor", [](double v, double a) { return conformal_factor(v, CatenoidParams(a)); },
          py::arg("v"), py::arg("a") = 1.0);
    m.def("gaussian_curvature",
          [](double v, double a) { return gaussian_curvature(v, CatenoidParams(a)); }, py::arg("v"),
          py::arg("a") = 1.0);
    m.def("curvature_gradient",
          [](double v, double a) { return curvature_gradient(v, CatenoidParams(a)); }, py::arg("v"),
          py::arg("a") = 1.0);
    m.def("momentum_density",
          [](double v, double a) { return momentum_density(v, CatenoidParams(a)); }, py::arg("v"),
          py::arg("a") = 1.0);
    m.def(
        "chord_distance",
        [](double v1, double u1, double v2, double u2, double a) {
            return chord_distance({v1, u1}, {v2, u2}, CatenoidParams(a));
        },
        py::arg("v1"), py::arg("u1"), py::arg("v2"), py::arg("u2"), py::arg("a") = 1.0);

    m.def(
        "hamiltonian",
        [](const std::vector<double>& g, const std::vector<double>& v, const std::vector<double>& u,
           double a) { return hamiltonian(make_system(g, v, u, a)); },
        py::arg("gammas"), py::arg("v"), py::arg("u"), py::arg("a") = 1.0);
    m.def(
        "momentum",
        [](const std::vector<double>& g, const std::vector<double>& v, const std::vector<double>& u,
           double a) { return momentum(make_system(g, v, u, a)); },
        py::arg("gammas"), py::arg("v"), py::arg("u"), py::arg("a") = 1.0);
    m.def(
        "vector_field",
        [](const std::vector<double>& g, const std::vector<double>& v, const std::vector<double>& u,
           double a) {
            const PhaseVelocity pv = vector_field(make_system(g, v, u, a));
            return py::make_tuple(pv.dv, pv.du);
        },
        py::arg("gammas"), py::arg("v"), py::arg("u"), py::arg("a") = 1.0,
        "Returns (dv/dt, du/dt) for every vortex.");

    m.def("omega_symmetric",
          [](double V0, double gamma, double a) { return omega_symmetric(V0, gamma, CatenoidParams(a)); },
          py::arg("V0"), py::arg("gamma") = 1.0, py::arg("a") = 1.0);
    m.def(
        "omega_from_curvature",
        [](double V, double gamma, double a) { return omega_from_curvature(V, gamma, CatenoidParams(a)); },
        py::arg("V"), py::arg("gamma") = 1.0, py::arg("a") = 1.0);
    m.def("v_star", [](double a) { return v_star(CatenoidParams(a)); }, py::arg("a") = 1.0);
    m.def(
        "stability",
        [](double V0, double gamma, double a) {
            const StabilityData s = stability(V0, gamma, CatenoidParams(a));
            py::dict d;
            d["A"] = s.A;
            d["B"] = s.B;
            d["lambda"] = s.lambda;
            d["eigen_ratio"] = s.eigen_ratio;
            return d;
        },
        py::arg("V0"), py::arg("gamma") = 1.0, py::arg("a") = 1.0);

    m.def(
        "solve_V",
        [](double dv, double E, double J0, double gamma1, double gamma2, double a) {
            return solve_V(dv, ReducedConstants::make(E, J0, gamma1, gamma2, CatenoidParams(a)));
        },
        py::arg("dv"), py::arg("E"), py::arg("J0"), py::arg("gamma1") = 1.0, py::arg("gamma2") = 1.0,
        py::arg("a") = 1.0);
    m.def(
        "reduced_constants",
        [](const std::vector<double>& g, const std::vector<double>& v, const std::vector<double>& u,
           double a) {
            const ReducedConstants rc = ReducedConstants::from_state(make_system(g, v, u, a));
            py::dict d;
            d["E"] = rc.E;
            d["J0"] = rc.J0;
            d["C_E"] = rc.C_E;
            return d;
        },
        py::arg("gammas"), py::arg("v"), py::arg("u"), py::arg("a") = 1.0);

    m.def(
        "_run_scenario_json",
        [](const std::string& scenario, const py::dict& overrides) {
            const ScenarioConfig cfg = make_config(scenario, overrides);
            nlohmann::json summary;
            {
                py::gil_scoped_release release;
                summary = run_scenario(cfg);
            }
            return summary.dump();
        },
        py::arg("scenario"), py::arg("overrides") = py::dict());
}
