#include <pybind11/functional.h>
#include <pybind11/iostream.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "jensen_sharp/bounds.hpp"
#include "jensen_sharp/cli.hpp"
#include "jensen_sharp/errors.hpp"
#include "jensen_sharp/grammar.hpp"
#include "jensen_sharp/oracle.hpp"
#include "jensen_sharp/partition.hpp"
#include "jensen_sharp/report.hpp"

namespace py = pybind11;
using namespace jsharp;

namespace {

FunctionSpec function_from(const py::object& phi) {
    if (py::isinstance<FunctionSpec>(phi)) return phi.cast<FunctionSpec>();
    return make_catalog_function(grammar::parse_function(phi.cast<std::string>()));
}

Distribution distribution_from(const py::object& dist) {
    if (py::isinstance<Distribution>(dist)) return dist.cast<Distribution>();
    return grammar::parse_distribution(dist.cast<std::string>());
}

py::object to_python(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Sharpened bounds on the Jensen gap";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<UsageError>(m, "UsageError", base.ptr());
    py::register_exception<NumericError>(m, "NumericError", base.ptr());

    py::class_<FunctionSpec>(m, "Function")
        .def(py::init([](const std::string& spec) { return function_from(py::str(spec)); }), py::arg("spec"))
        .def_readonly("name", &FunctionSpec::name)
        .def_property_readonly("shape", [](const FunctionSpec& f) { return to_string(f.phi_prime_shape); })
        .def("__call__", [](const FunctionSpec& f, double x) { return f.eval(x); })
        .def("d1", [](const FunctionSpec& f, double x) { return f.deriv1(x); })
        .def("d2", [](const FunctionSpec& f, double x) { return f.deriv2(x); })
        .def("__repr__", [](const FunctionSpec& f) { return "Function('" + f.name + "')"; });

    m.def(
        "custom_function",
        [](std::string name, RealMap f, RealMap d1, RealMap d2, double lo, double hi) {
            return make_custom_function(std::move(name), std::move(f), std::move(d1), std::move(d2),
                                        SupportInterval::open(lo, hi));
        },
        py::arg("name"), py::arg("f"), py::arg("d1"), py::arg("d2"), py::arg("lo") = -kInf, py::arg("hi") = kInf);

    py::class_<Distribution>(m, "Distribution")
        .def(py::init([](const std::string& spec) { return distribution_from(py::str(spec)); }), py::arg("spec"))
        .def_static("normal", &Distribution::normal, py::arg("mu") = 0.0, py::arg("sigma") = 1.0)
        .def_static("exponential", &Distribution::exponential, py::arg("rate") = 1.0)
        .def_static("uniform", &Distribution::uniform, py::arg("lo"), py::arg("hi"))
        .def_static("empirical", &Distribution::empirical, py::arg("samples"))
        .def_property_readonly("mean", &Distribution::mean)
        .def_property_readonly("variance", &Distribution::variance)
        .def("pdf", &Distribution::pdf)
        .def("cdf", &Distribution::cdf)
        .def("quantile", &Distribution::quantile)
        .def("sample", &Distribution::sample, py::arg("n"), py::arg("seed") = kDefaultSeed)
        .def("__repr__", [](const Distribution& d) { return "Distribution('" + d.describe() + "')"; });

    py::class_<GapBounds>(m, "GapBounds")
        .def_readonly("lower", &GapBounds::lower)
        .def_readonly("upper", &GapBounds::upper)
        .def_readonly("mean", &GapBounds::mean_used)
        .def_readonly("variance", &GapBounds::variance_used)
        .def_property_readonly("method", [](const GapBounds& b) { return to_string(b.method); })
        .def_property_readonly("witness_lower", [](const GapBounds& b) { return b.lower_detail.at; })
        .def_property_readonly("witness_upper", [](const GapBounds& b) { return b.upper_detail.at; })
        .def("to_dict", [](const GapBounds& b) { return to_python(report::to_json(b)); })
        .def("__repr__", [](const GapBounds& b) {
            return "GapBounds(lower=" + format_real(b.lower) + ", upper=" + format_real(b.upper) + ")";
        });

    py::class_<GapEstimate>(m, "GapEstimate")
        .def_readonly("value", &GapEstimate::value)
        .def_readonly("error_bound", &GapEstimate::error_bound)
        .def_property_readonly("method", [](const GapEstimate& e) { return to_string(e.method); })
        .def("to_dict", [](const GapEstimate& e) { return to_python(report::to_json(e)); })
        .def("__repr__", [](const GapEstimate& e) {
            return "GapEstimate(value=" + format_real(e.value) + ", error_bound=" + format_real(e.error_bound) + ")";
        });

    py::class_<PowerMeanBracket>(m, "PowerMeanBracket")
        .def_readonly("p", &PowerMeanBracket::p)
        .def_readonly("moment_lower", &PowerMeanBracket::moment_lower)
        .def_readonly("moment_upper", &PowerMeanBracket::moment_upper)
        .def_readonly("mean_lower", &PowerMeanBracket::mean_lower)
        .def_readonly("mean_upper", &PowerMeanBracket::mean_upper)
        .def_readonly("gap", &PowerMeanBracket::gap);

    m.def("h", [](const py::object& phi, double nu, double x) { return h_eval(function_from(phi), nu, x).value; },
          py::arg("phi"), py::arg("nu"), py::arg("x"), "h(x; nu), the slope-of-secant curvature term.");

    m.def("bound", [](const py::object& phi, const py::object& dist) {
        return jensen_bounds(function_from(phi), distribution_from(dist));
    }, py::arg("phi"), py::arg("dist"));

    m.def("curvature_bound", [](const py::object& phi, const py::object& dist) {
        return curvature_bounds(function_from(phi), distribution_from(dist));
    }, py::arg("phi"), py::arg("dist"));

    m.def("sample_bound", [](const py::object& phi, const std::vector<double>& xs) {
        return sample_bounds(function_from(phi), xs);
    }, py::arg("phi"), py::arg("samples"));

    m.def(
        "partition",
        [](const py::object& phi, const py::object& dist, int cells, std::vector<double> cuts) {
            auto d = distribution_from(dist);
            if (cuts.empty()) cuts = equal_probability_cuts(d, cells);
            auto plan = build_partition(d, cuts);
            return to_python(report::to_json(plan, partition_bounds(function_from(phi), plan)));
        },
        py::arg("phi"), py::arg("dist"), py::arg("cells") = 3, py::arg("cuts") = std::vector<double>{});

    m.def("power_mean_bound", [](const py::object& dist, double r, double s) {
        return power_mean_bounds(distribution_from(dist), r, s);
    }, py::arg("dist"), py::arg("r") = 1.0, py::arg("s") = -1.0);

    m.def(
        "gap",
        [](const py::object& phi, const py::object& dist, const std::string& mode, long samples, std::uint64_t seed) {
            OracleOptions o;
            if (mode == "quad") o.mode = OracleOptions::Mode::Quadrature;
            else if (mode == "mc") o.mode = OracleOptions::Mode::MonteCarlo;
            else if (mode != "auto") throw ParseError("mode must be auto, quad or mc");
            o.mc_samples = samples;
            o.seed = seed;
            return estimate_gap(function_from(phi), distribution_from(dist), o);
        },
        py::arg("phi"), py::arg("dist"), py::arg("mode") = "auto", py::arg("samples") = kDefaultMonteCarloSamples,
        py::arg("seed") = kDefaultSeed);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code = cli::kExitOk;
            try {
                code = cli::run(cli::parse_args(args), out, err);
            } catch (const Error& e) {
                err << "error: " << e.what() << '\n';
                code = cli::kExitUsage;
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs a CLI command in-process; returns (exit_code, stdout, stderr).");
}
