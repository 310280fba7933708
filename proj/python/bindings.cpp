#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "singma/analysis.hpp"
#include "singma/config.hpp"
#include "singma/barriers.hpp"
#include "singma/harness.hpp"
#include "singma/solver.hpp"
#include "singma/verify.hpp"

namespace py = pybind11;
using namespace singma;

PYBIND11_MODULE(_singma, m) {
    m.doc() = "Singular Monge-Ampere barriers, wide-stencil solver and exponent analysis";
    py::register_exception<SolveError>(m, "SolveError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<OriginInfo>(m, "OriginInfo")
        .def_readonly("interior", &OriginInfo::interior)
        .def_readonly("gamma0", &OriginInfo::gamma0);

    py::class_<Domain>(m, "Domain")
        .def_static("parabola_cap", &Domain::parabola_cap, py::arg("dim") = 2, py::arg("t") = 1.0, py::arg("gamma") = 0.0)
        .def_static("sphere_cap", &Domain::sphere_cap, py::arg("dim") = 2)
        .def_static("ball", &Domain::ball, py::arg("dim") = 2, py::arg("radius") = 1.0)
        .def_property_readonly("dim", &Domain::dim)
        .def_property_readonly("name", &Domain::name)
        .def("contains", &Domain::contains)
        .def("dist_to_boundary", &Domain::dist_to_boundary)
        .def("diameter", &Domain::diameter)
        .def("volume", &Domain::volume)
        .def("contains_origin_interior", &Domain::contains_origin_interior);

    py::class_<RhsSpec>(m, "RhsSpec")
        .def_static("power_singular", &RhsSpec::power_singular, py::arg("p"), py::arg("scale") = 1.0)
        .def_static("degenerate", &RhsSpec::degenerate, py::arg("q"), py::arg("scale") = 1.0)
        .def_static("affine_sphere", &RhsSpec::affine_sphere, py::arg("k"), py::arg("scale") = 1.0)
        .def_readonly("parameter", &RhsSpec::parameter)
        .def_readonly("scale", &RhsSpec::scale)
        .def_property_readonly("name", &RhsSpec::name);

    py::class_<Jet2>(m, "Jet2")
        .def_readonly("value", &Jet2::value)
        .def_readonly("gradient", &Jet2::gradient)
        .def_readonly("hessian", &Jet2::hessian);

    py::class_<Barrier>(m, "Barrier")
        .def_property_readonly("kind", [](const Barrier& b) { return to_string(b.kind()); })
        .def_property_readonly("dim", &Barrier::dim)
        .def_property_readonly("a", &Barrier::exponent_a)
        .def_property_readonly("b", &Barrier::exponent_b)
        .def_property_readonly("constant", &Barrier::constant)
        .def_property_readonly("natural_rhs", &Barrier::natural_rhs)
        .def("value", &Barrier::value)
        .def("eval_jet", &Barrier::eval_jet)
        .def("det_hessian", &Barrier::det_hessian)
        .def("residual_ratio", [](const Barrier& b, const Vec& x) { return residual_ratio(b, b.natural_rhs(), x); })
        .def("to_record", &Barrier::to_record)
        .def("__repr__", &barrier_label);

    m.def("c_alpha", &c_alpha, py::arg("diam"), py::arg("alpha"));
    m.def("singular_exponent", &singular_exponent);
    m.def("affine_exponent", &affine_exponent);
    m.def("sharp_constant_suplem", &sharp_constant_suplem);
    m.def("sharp_constant_suplem2", &sharp_constant_suplem2);
    m.def("sharp_constant_suplemk", &sharp_constant_suplemk);
    m.def("sub_valpha", &sub_valpha, py::arg("n"), py::arg("alpha"), py::arg("diam"));
    m.def("sub_valpha_for", &sub_valpha_for, py::arg("n"), py::arg("p"), py::arg("diam"));
    m.def("super_w", &super_w, py::arg("n"), py::arg("p"));
    m.def("super_w2", &super_w2, py::arg("n"), py::arg("p"));
    m.def("super_wt", &super_wt, py::arg("n"), py::arg("p"), py::arg("t"));
    m.def("sub_valpha_k", &sub_valpha_k, py::arg("n"), py::arg("k"), py::arg("gamma"), py::arg("gamma0"), py::arg("diam"));
    m.def("super_wk", &super_wk, py::arg("n"), py::arg("k"), py::arg("gamma"));
    m.def("explicit_solution", [](const std::string& kind, int n) {
        return explicit_solution(barrier_kind_from_string(kind), n);
    }, py::arg("kind"), py::arg("n"));
    m.def("barrier_from_record", &barrier_from_record);

    py::class_<CheckRow>(m, "CheckRow")
        .def_readonly("barrier", &CheckRow::barrier)
        .def_readonly("check", &CheckRow::check)
        .def_readonly("samples", &CheckRow::samples)
        .def_readonly("worst_margin", &CheckRow::worst_margin)
        .def_readonly("passed", &CheckRow::pass);
    auto opts = [](int samples, std::uint64_t seed) {
        VerifyOptions o;
        o.samples = samples;
        o.seed = seed;
        return o;
    };
    m.def("verify_power_family", [opts](int n, double p, int samples, std::uint64_t seed) {
        return verify_power_family(n, p, opts(samples, seed));
    }, py::arg("n"), py::arg("p"), py::arg("samples") = 10000, py::arg("seed") = 1);
    m.def("verify_affine_family", [opts](int n, double k, double gamma, int samples, std::uint64_t seed) {
        return verify_affine_family(n, k, gamma, opts(samples, seed));
    }, py::arg("n"), py::arg("k"), py::arg("gamma"), py::arg("samples") = 10000, py::arg("seed") = 1);

    py::class_<SolveConfig>(m, "SolveConfig")
        .def(py::init<>())
        .def_readwrite("h", &SolveConfig::h)
        .def_readwrite("stencil_width", &SolveConfig::stencil_width)
        .def_readwrite("eps0", &SolveConfig::eps0)
        .def_readwrite("eps_ratio", &SolveConfig::eps_ratio)
        .def_readwrite("eps_floor", &SolveConfig::eps_floor)
        .def_readwrite("damping", &SolveConfig::damping)
        .def_readwrite("tol", &SolveConfig::tol)
        .def_readwrite("max_outer", &SolveConfig::max_outer)
        .def_readwrite("nested", &SolveConfig::nested)
        .def_readwrite("gap_floor", &SolveConfig::gap_floor);

    py::class_<DiscreteSolution>(m, "DiscreteSolution")
        .def_property_readonly("h", [](const DiscreteSolution& s) { return s.grid.h; })
        .def_property_readonly("points", [](const DiscreteSolution& s) {
            Eigen::MatrixXd p(s.grid.size(), 2);
            for (int i = 0; i < s.grid.size(); ++i) p.row(i) = s.grid.point(i).transpose();
            return p;
        })
        .def_readonly("values", &DiscreteSolution::values)
        .def_readonly("eps_final", &DiscreteSolution::eps_final)
        .def_readonly("iterations", &DiscreteSolution::iterations)
        .def_readonly("residual_norm", &DiscreteSolution::residual_norm)
        .def_readonly("runtime_seconds", &DiscreteSolution::runtime_seconds)
        .def("interpolate", &DiscreteSolution::interpolate)
        .def("sup_norm", &DiscreteSolution::sup_norm)
        .def("min_second_difference", &DiscreteSolution::min_second_difference);
    m.def("epsilon_zero", &epsilon_zero, py::arg("n"), py::arg("p"), py::arg("area"));
    m.def("solve", &solve, py::arg("domain"), py::arg("rhs"), py::arg("config") = SolveConfig{},
          py::call_guard<py::gil_scoped_release>());

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("slope", &FitResult::slope)
        .def_readonly("intercept", &FitResult::intercept)
        .def_readonly("r_squared", &FitResult::r_squared)
        .def_readonly("n_points", &FitResult::n_points);
    m.def("fit_exponent", &fit_exponent, py::arg("samples"), py::arg("dist_min"), py::arg("dist_max"));
    m.def("axis_samples", py::overload_cast<const DiscreteSolution&, double, double, double, int>(&axis_samples),
          py::arg("solution"), py::arg("shift"), py::arg("dist_min"), py::arg("dist_max"), py::arg("count") = 40);
    m.def("axis_samples", py::overload_cast<const Barrier&, double, double, int>(&axis_samples), py::arg("barrier"),
          py::arg("dist_min"), py::arg("dist_max"), py::arg("count") = 40);

    py::class_<BootstrapTrace>(m, "BootstrapTrace")
        .def_readonly("beta", &BootstrapTrace::beta)
        .def_readonly("error", &BootstrapTrace::error)
        .def_readonly("limit", &BootstrapTrace::limit);
    m.def("bootstrap", &bootstrap, py::arg("n"), py::arg("q"), py::arg("steps"));
    m.def("bootstrap_error_closed_form", &bootstrap_error_closed_form);
    m.def("bootstrap_minimal_steps", &bootstrap_minimal_steps);

    py::class_<ComparisonResult>(m, "ComparisonResult")
        .def_readonly("passed", &ComparisonResult::pass)
        .def_readonly("worst_gap", &ComparisonResult::worst_gap)
        .def_readonly("worst_point", &ComparisonResult::worst_point)
        .def_readonly("samples", &ComparisonResult::samples);
    m.def("check_comparison", &check_comparison, py::arg("lower"), py::arg("upper"), py::arg("domain"),
          py::arg("n_samples"), py::arg("seed") = 1, py::arg("tolerance") = 0.0, py::arg("margin") = 1e-3);
    m.def("trace_inequality_check", &trace_inequality_check);
    m.def("mixc_exponent", &mixc_exponent);
    m.def("mixc_identity_residual", &mixc_identity_residual);

    m.def("run", [](const std::string& subcommand, const std::map<std::string, std::string>& config) {
        Config cfg;
        for (const auto& [k, v] : config) cfg.set(k, v);
        std::ostringstream log;
        const RunOutcome r = run(subcommand, cfg, log);
        return py::make_tuple(r.exit_code, r.files, log.str());
    }, py::arg("subcommand"), py::arg("config") = std::map<std::string, std::string>{},
       "Run a harness subcommand; returns (exit_code, files, log).");
}
