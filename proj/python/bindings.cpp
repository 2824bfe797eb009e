#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <string>

#include "hexconf/calculus.hpp"
#include "hexconf/cli.hpp"
#include "hexconf/error.hpp"
#include "hexconf/fan.hpp"
#include "hexconf/harmonic.hpp"
#include "hexconf/hyperbolic.hpp"
#include "hexconf/layout.hpp"
#include "hexconf/maxprinciple.hpp"

namespace py = pybind11;
using namespace hexconf;

namespace {

py::object to_python(const nlohmann::json& j)
{
    return py::module_::import("json").attr("loads")(j.dump());
}

Command parse_command(const std::string& name)
{
    for (int k = 0; k <= static_cast<int>(Command::hyp_reduce); ++k) {
        const auto c = static_cast<Command>(k);
        if (to_string(c) == name) {
            return c;
        }
    }
    throw Error(ErrorKind::invalid_config, "unknown command '" + name + "'");
}

ExperimentConfig config_from_kwargs(const std::string& command, const py::kwargs& kw)
{
    ExperimentConfig c;
    c.command = parse_command(command);
    for (const auto& [key, value] : kw) {
        const auto k = key.cast<std::string>();
        if (k == "seed") c.seed = value.cast<std::uint64_t>();
        else if (k == "trials") c.trials = value.cast<std::uint64_t>();
        else if (k == "tolerance") c.tolerance = value.cast<double>();
        else if (k == "radius") c.radius = value.cast<int>();
        else if (k == "n") c.n = value.cast<int>();
        else if (k == "j") c.j = value.cast<int>();
        else if (k == "target") c.target = value.cast<double>();
        else if (k == "M") c.M = value.cast<double>();
        else if (k == "N") c.N = value.cast<double>();
        else if (k == "rmax") c.rmax = value.cast<int>();
        else if (k == "eps") c.eps = value.cast<double>();
        else if (k == "eps_grid") c.eps_grid = value.cast<std::vector<double>>();
        else if (k == "values") c.values = value.cast<std::vector<double>>();
        else if (k == "file") c.file = value.cast<std::string>();
        else if (k == "file2") c.file2 = value.cast<std::string>();
        else if (k == "output") c.output = value.cast<std::string>();
        else if (k == "svg") c.svg = value.cast<std::string>();
        else throw Error(ErrorKind::invalid_config, "unknown option '" + k + "'");
    }
    return c;
}

py::dict certificate_dict(const QuasiHarmonicCertificate& c)
{
    py::dict d;
    d["weights"] = c.weights;
    d["floor"] = c.floor;
    d["bound"] = c.bound;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.attr("__version__") = std::string(kVersion);

    static py::exception<Error> error_type(m, "HexconfError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const Error& e) {
            py::object exc = py::handle(error_type.ptr())(e.what());
            exc.attr("kind") = std::string(to_string(e.kind()));
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    m.def("angles", [](double a, double b, double c) {
        const auto t = angles({a, b, c});
        return std::array<double, 3>{t.a, t.b, t.c};
    }, py::arg("a"), py::arg("b"), py::arg("c"));

    py::class_<FanConfiguration>(m, "Fan")
        .def(py::init<std::vector<double>>(), py::arg("factors"))
        .def_static("regular", &FanConfiguration::regular, py::arg("n"), py::arg("boundary_factor") = 0.0)
        .def_property_readonly("n", &FanConfiguration::n)
        .def_property_readonly("factors",
                               [](const FanConfiguration& f) {
                                   const auto s = f.factors();
                                   return std::vector<double>(s.begin(), s.end());
                               })
        .def("curvature", [](const FanConfiguration& f) { return curvature(f); })
        .def("alphas", [](const FanConfiguration& f) { return alphas(f); })
        .def("in_T", [](const FanConfiguration& f) { return in_T(f); })
        .def("in_D", [](const FanConfiguration& f, double tol) { return in_D(f, tol); },
             py::arg("tol") = kDelaunayTolerance)
        .def("min_angle", [](const FanConfiguration& f) { return min_angle(f); })
        .def("curvature_gradient", [](const FanConfiguration& f) { return curvature_gradient(f); })
        .def("__repr__", [](const FanConfiguration& f) { return "Fan(n=" + std::to_string(f.n()) + ")"; });

    m.def("regular_flat_factor", &regular_flat_factor, py::arg("n"));
    m.def("solve_flat", [](const FanConfiguration& f, int j, double target) {
        return solve_flat(f, j, {.target = target});
    }, py::arg("fan"), py::arg("j"), py::arg("target") = 0.0);
    m.def("sample_D0", [](std::uint64_t seed, int n) { return sample_D0(seed, n); }, py::arg("seed"),
          py::arg("n"));

    m.def("fd_check", [](std::uint64_t seed, std::uint64_t trials, int n) {
        const auto r = fd_check(seed, trials, n);
        py::dict d;
        d["trials"] = r.trials;
        d["max_angle_error"] = r.max_angle_error;
        d["max_gradient_error"] = r.max_gradient_error;
        d["max_row_sum"] = r.max_row_sum;
        d["max_gradient_sum"] = r.max_gradient_sum;
        return d;
    }, py::arg("seed"), py::arg("trials"), py::arg("n") = 6);

    m.def("search_counterexample", [](std::uint64_t seed, std::uint64_t trials, int n) {
        const auto r = search_counterexample(seed, trials, n);
        py::dict d;
        d["samples"] = r.samples;
        d["counterexamples"] = r.counterexamples.size();
        d["constructions"] = r.constructions;
        d["equal_verdicts"] = r.equal_verdicts;
        return d;
    }, py::arg("seed"), py::arg("trials"), py::arg("n") = 6);

    m.def("flow_stress", [](std::uint64_t seed, std::uint64_t trials, int n_min, int n_max) {
        const auto r = flow_stress(seed, trials, n_min, n_max);
        py::dict d;
        d["passed"] = r.passed();
        d["max_drift"] = r.max_drift;
        d["min_initial_X"] = r.min_initial_X;
        d["saturation"] = r.saturation;
        d["degeneration"] = r.degeneration;
        d["alpha_decreases"] = r.alpha_decreases;
        return d;
    }, py::arg("seed"), py::arg("trials"), py::arg("n_min") = 4, py::arg("n_max") = 8);

    m.def("average_weights", [](const std::array<double, 6>& a, double eps, double M) {
        return certificate_dict(average_weights(a, eps, M));
    }, py::arg("a"), py::arg("eps"), py::arg("M"));

    m.def("gradient_feasibility_limit", [](double N) { return gradient_feasibility_limit(N); }, py::arg("N"));
    m.def("find_overlap_radius", &find_overlap_radius, py::arg("M"), py::arg("N"), py::arg("R_max"));
    m.def("develop_constant_gradient", [](double M, double N, int R) {
        const auto chart = develop(constant_gradient_field(M, N, R), {0, 0}, R);
        const auto overlap = overlap_area(chart);
        py::dict d;
        d["faces"] = chart.faces.size();
        d["holonomy_defect"] = chart.holonomy_defect;
        d["overlap"] = overlap.found;
        d["overlap_area"] = overlap.area;
        d["svg"] = chart_svg(chart, &overlap);
        return d;
    }, py::arg("M"), py::arg("N"), py::arg("R"));

    m.def("length_cross_ratio",
          py::overload_cast<double, double, double, double>(&length_cross_ratio), py::arg("l_il"),
          py::arg("l_jk"), py::arg("l_jl"), py::arg("l_ik"));
    m.def("circumcircle", [](std::array<double, 2> p, std::array<double, 2> q, std::array<double, 2> r) {
        const auto c = circumcircle({p[0], p[1]}, {q[0], q[1]}, {r[0], r[1]});
        return py::make_tuple(py::make_tuple(c.center.x, c.center.y), c.radius);
    });
    m.def("dihedral_angle", [](std::array<double, 2> c1, double r1, std::array<double, 2> c2, double r2) {
        return dihedral_angle({{c1[0], c1[1]}, r1}, {{c2[0], c2[1]}, r2});
    });
    m.def("klein_stereographic", [](std::array<double, 2> p, bool inverse) {
        const auto q =
            klein_stereographic({p[0], p[1]}, inverse ? KleinDirection::inverse : KleinDirection::forward);
        return std::array<double, 2>{q.x, q.y};
    }, py::arg("p"), py::arg("inverse") = false);

    m.def("run", [](const std::string& command, const py::kwargs& kw) {
        const auto r = run(config_from_kwargs(command, kw));
        return py::make_tuple(r.exit_code, to_python(r.report));
    }, py::arg("command"));
    m.def("report_text", [](const std::string& command, const py::kwargs& kw) {
        return dump_report(run(config_from_kwargs(command, kw)).report);
    }, py::arg("command"));
}
