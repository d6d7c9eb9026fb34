#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "ivlab/cli.hpp"
#include "ivlab/convex_bodies.hpp"
#include "ivlab/intrinsic_entropy.hpp"
#include "ivlab/logconcave.hpp"
#include "ivlab/superconv.hpp"
#include "ivlab/verify.hpp"

namespace py = pybind11;
using namespace ivlab;

namespace {

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

template <class T>
py::object report(const T& r) {
    return to_py(nlohmann::json(r));
}

RateMode parse_mode(const std::string& m) {
    if (m == "gn_star") return RateMode::gn_star;
    if (m == "lambda_star") return RateMode::lambda_star;
    throw std::invalid_argument("mode must be gn_star or lambda_star");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Intrinsic volumes, super-convolutive limits and intrinsic entropy curves";
    m.attr("__version__") = kVersion;

    py::class_<IntrinsicVolumeSequence>(m, "IntrinsicVolumeSequence")
        .def(py::init<std::vector<double>>(), py::arg("logv"))
        .def_static("from_values", [](const std::vector<double>& v) { return IntrinsicVolumeSequence::from_values(v); })
        .def_property_readonly("dim", &IntrinsicVolumeSequence::dim)
        .def_property_readonly("logv",
                               [](const IntrinsicVolumeSequence& s) {
                                   return std::vector<double>(s.logv().begin(), s.logv().end());
                               })
        .def("values", &IntrinsicVolumeSequence::values)
        .def("log_at", &IntrinsicVolumeSequence::log_at)
        .def("to_json", [](const IntrinsicVolumeSequence& s) { return nlohmann::json(s).dump(); })
        .def("__len__", [](const IntrinsicVolumeSequence& s) { return s.dim() + 1; })
        .def("__repr__", [](const IntrinsicVolumeSequence& s) {
            return "IntrinsicVolumeSequence(" + nlohmann::json(s).dump() + ")";
        });

    m.def("unit_ball_volume", &unit_ball_volume, py::arg("j"), "log omega_j");
    m.def("ball_intrinsic_volumes", &ball_intrinsic_volumes, py::arg("n"), py::arg("r"));
    m.def("cube_intrinsic_volumes", &cube_intrinsic_volumes, py::arg("n"), py::arg("A"));
    m.def("crosspolytope_intrinsic_volumes", &crosspolytope_intrinsic_volumes, py::arg("n"), py::arg("A"));
    m.def("convolve", &convolve, py::arg("a"), py::arg("b"));
    m.def("steiner_volume", py::overload_cast<const IntrinsicVolumeSequence&, double>(&steiner_volume), py::arg("v"),
          py::arg("t"));
    m.def("check_alexandrov_fenchel",
          [](const IntrinsicVolumeSequence& v, double tol) { return report(check_alexandrov_fenchel(v, tol)); },
          py::arg("v"), py::arg("tolerance") = 1e-9);

    py::class_<Oracle>(m, "Oracle")
        .def_readonly("dim", &Oracle::dim)
        .def_readonly("bounding_radius", &Oracle::bounding_radius)
        .def_readonly("label", &Oracle::label)
        .def("contains", [](const Oracle& o, const std::vector<double>& x) { return o.contains(x); })
        .def("distance", [](const Oracle& o, const std::vector<double>& x) { return oracle_distance(o, x); });
    m.def("cube_oracle", &cube_oracle, py::arg("n"), py::arg("A") = 1.0);
    m.def("ball_oracle", &ball_oracle, py::arg("n"), py::arg("r") = 1.0);
    m.def("crosspolytope_oracle", &crosspolytope_oracle, py::arg("n"), py::arg("A") = 1.0);
    m.def(
        "mc_tube_volume",
        [](const Oracle& o, double t, std::int64_t samples, std::uint64_t seed, int jobs) {
            McOptions opt;
            opt.jobs = jobs;
            py::gil_scoped_release release;
            const auto e = mc_tube_volume(o, t, samples, seed, opt);
            return std::make_pair(e.estimate, e.stderr_);
        },
        py::arg("oracle"), py::arg("t"), py::arg("samples"), py::arg("seed"), py::arg("jobs") = 1);
    m.def(
        "steiner_fit",
        [](const Oracle& o, std::vector<double> t_grid, std::int64_t samples, std::uint64_t seed, int jobs) {
            if (t_grid.empty()) t_grid = default_t_grid(o);
            McOptions opt;
            opt.jobs = jobs;
            SteinerFitReport r;
            {
                py::gil_scoped_release release;
                r = steiner_fit(o, t_grid, samples, seed, opt);
            }
            return report(r);
        },
        py::arg("oracle"), py::arg("t_grid") = std::vector<double>{}, py::arg("samples") = 1000000,
        py::arg("seed") = 1, py::arg("jobs") = 1);

    py::class_<SuperConvFamily>(m, "SuperConvFamily")
        .def_property_readonly("max_n", &SuperConvFamily::max_n)
        .def_property_readonly("provenance", &SuperConvFamily::provenance)
        .def("at", &SuperConvFamily::at, py::arg("n"), py::return_value_policy::copy);
    m.def("cube_family", &cube_family, py::arg("A"), py::arg("max_n"), py::arg("jobs") = 1);
    m.def("ball_family", &ball_family, py::arg("rho2"), py::arg("max_n"), py::arg("jobs") = 1);
    m.def("crosspolytope_family", &crosspolytope_family, py::arg("A"), py::arg("max_n"), py::arg("jobs") = 1);
    m.def("appendix_example_family", &appendix_example_family, py::arg("alpha"), py::arg("delta"), py::arg("max_n"));
    m.def(
        "check_superconvolutive",
        [](const SuperConvFamily& f, int up_to, double tol) { return report(check_superconvolutive(f, up_to, tol)); },
        py::arg("family"), py::arg("up_to"), py::arg("tolerance") = 1e-9);
    m.def("log_generating_function", &log_generating_function, py::arg("family"), py::arg("n"), py::arg("t"));
    m.def(
        "estimate_lambda", [](const SuperConvFamily& f, double t) { return report(estimate_lambda(f, t)); },
        py::arg("family"), py::arg("t"));
    m.def(
        "legendre_conjugate",
        [](const std::function<double(double)>& f, double theta, double lo, double hi) {
            const auto r = legendre_conjugate(f, theta, {lo, hi});
            return py::dict(py::arg("value") = r.value, py::arg("argmax") = r.argmax,
                            py::arg("widenings") = r.widenings, py::arg("at_infinity") = r.at_infinity);
        },
        py::arg("f"), py::arg("theta"), py::arg("lo"), py::arg("hi"));
    m.def(
        "rate_curve",
        [](const SuperConvFamily& f, const std::vector<double>& grid, const std::string& mode) {
            return report(rate_curve(f, grid, parse_mode(mode)));
        },
        py::arg("family"), py::arg("theta_grid"), py::arg("mode") = "gn_star");
    m.def("interval_mass_bounds", &interval_mass_bounds, py::arg("family"), py::arg("a"), py::arg("b"), py::arg("n"));

    py::class_<LogConcaveDensity>(m, "LogConcaveDensity")
        .def_static("gaussian", &LogConcaveDensity::gaussian, py::arg("nu") = 1.0)
        .def_static("uniform", &LogConcaveDensity::uniform, py::arg("A") = 1.0)
        .def_static("laplace", &LogConcaveDensity::laplace, py::arg("b") = 1.0)
        .def_static("exponential", &LogConcaveDensity::exponential, py::arg("lam") = 1.0)
        .def_static(
            "custom",
            [](std::function<double(double)> phi, double lo, double hi, const std::string& label) {
                return LogConcaveDensity::custom(std::move(phi), {lo, hi}, label);
            },
            py::arg("phi"), py::arg("lo"), py::arg("hi"), py::arg("label") = "custom")
        .def_static("tabulated", &LogConcaveDensity::tabulated, py::arg("x"), py::arg("phi"), py::arg("left_slope"),
                    py::arg("right_slope"))
        .def("phi", &LogConcaveDensity::phi)
        .def_property_readonly("entropy", &LogConcaveDensity::entropy)
        .def_property_readonly("eta", &LogConcaveDensity::eta)
        .def_property_readonly("argmin", &LogConcaveDensity::argmin)
        .def_property_readonly("family", [](const LogConcaveDensity& d) { return to_string(d.family()); });
    m.def("entropy_by_quadrature", &entropy_by_quadrature, py::arg("density"));
    m.def(
        "typical_membership",
        [](const LogConcaveDensity& d, double eps, const std::vector<double>& x) {
            return typical_membership(TypicalSetSpec(d, static_cast<int>(x.size()), eps), x);
        },
        py::arg("density"), py::arg("eps"), py::arg("x"));
    m.def(
        "linear_minorant", [](const LogConcaveDensity& d) { return report(linear_minorant(d)); }, py::arg("density"));
    m.def(
        "crosspolytope_bound",
        [](const LogConcaveDensity& d, int n, double eps, std::int64_t trials) {
            return report(crosspolytope_bound(TypicalSetSpec(d, n, eps), trials));
        },
        py::arg("density"), py::arg("n"), py::arg("eps"), py::arg("trials") = 10000);
    m.def(
        "bloat_check",
        [](const LogConcaveDensity& d, double eps, int n, std::int64_t trials, std::uint64_t seed) {
            return report(bloat_check(d, eps, n, trials, seed));
        },
        py::arg("density"), py::arg("eps"), py::arg("n"), py::arg("trials") = 10000, py::arg("seed") = 1);

    m.def("binary_entropy", &binary_entropy, py::arg("theta"));
    m.def("gaussian_h_theta", &gaussian_h_theta, py::arg("nu"), py::arg("theta"));
    m.def("uniform_h_theta", &uniform_h_theta, py::arg("A"), py::arg("theta"));
    m.def(
        "estimate_curve",
        [](const LogConcaveDensity& d, const std::vector<double>& grid, const std::vector<double>& ladder, int n_max,
           std::int64_t samples, std::uint64_t seed, int jobs) {
            CurveOptions o;
            o.eps_ladder = ladder;
            o.n_max = n_max;
            o.samples = samples;
            o.seed = seed;
            o.jobs = jobs;
            return report(estimate_curve(d, grid, o));
        },
        py::arg("density"), py::arg("theta_grid"), py::arg("eps_ladder") = std::vector<double>{0.2, 0.1, 0.05, 0.025},
        py::arg("n_max") = 400, py::arg("samples") = 200000, py::arg("seed") = 1, py::arg("jobs") = 1);
    m.def(
        "closed_form_curve",
        [](const LogConcaveDensity& d, const std::vector<double>& grid) { return report(closed_form_curve(d, grid)); },
        py::arg("density"), py::arg("theta_grid"));
    m.def(
        "epi_conjecture_check",
        [](const LogConcaveDensity& x, const LogConcaveDensity& y, const std::vector<double>& grid) {
            return report(epi_conjecture_check(x, y, grid));
        },
        py::arg("x"), py::arg("y"), py::arg("theta_grid"));
    m.def(
        "run_suite",
        [](const std::string& suite, std::uint64_t seed) {
            VerifyOptions o;
            o.seed = seed;
            return to_py(nlohmann::json(run_suite(suite, o)));
        },
        py::arg("suite"), py::arg("seed") = 1);
}
