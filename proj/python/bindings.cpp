#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>

#include "curltrace/errors.hpp"
#include "curltrace/mollify.hpp"
#include "curltrace/runner.hpp"
#include "curltrace/scenarios.hpp"
#include "curltrace/trace.hpp"
#include "curltrace/verify.hpp"

namespace py = pybind11;
using namespace curltrace;

namespace {

using Arr3 = std::array<double, 3>;

Vec3 to_vec(const Arr3& a) { return {a[0], a[1], a[2]}; }
Arr3 from_vec(const Vec3& v) { return {v.x, v.y, v.z}; }

TraceConfig trace_config(const GoldenScenario& s, double r0, int levels, std::size_t samples,
                         std::uint64_t seed) {
    TraceConfig cfg{r0, levels, samples, seed};
    if (!(cfg.r0 > 0.0)) cfg.r0 = default_r0(*s.set);
    return cfg;
}

py::dict estimate_dict(const TraceEstimate& est) {
    py::dict d;
    d["point"] = from_vec(est.point);
    d["inner_normal"] = from_vec(est.inner_normal);
    d["radii"] = est.radii;
    py::list values;
    for (const Vec3& v : est.values) values.append(from_vec(v));
    d["values"] = values;
    d["extrapolated"] = from_vec(est.extrapolated);
    d["std_error"] = est.std_error;
    d["tangential_defect"] = est.tangential_defect;
    d["limit_unstable"] = est.limit_unstable;
    return d;
}

TraceEstimate run_trace(const GoldenScenario& s, const Arr3& point, bool exterior, double r0,
                        int levels, std::size_t samples, std::uint64_t seed) {
    const TraceConfig cfg = trace_config(s, r0, levels, samples, seed);
    const auto radii = cfg.schedule();
    return exterior ? exterior_trace_at(s.field, *s.set, to_vec(point), radii,
                                        cfg.samples_per_radius, cfg.seed, s.working_box)
                    : interior_trace_at(s.field, *s.set, to_vec(point), radii,
                                        cfg.samples_per_radius, cfg.seed, s.working_box);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() =
        "Interior and exterior tangential traces of bounded curl-measure fields on analytic "
        "sets of finite perimeter, by half-ball averaging with radius extrapolation.";

    py::register_exception<ConfigError>(m, "ConfigError");
    static py::exception<Error> numerical_error(m, "NumericalError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ConfigError&) {
            throw;  // handled by the registered exception above
        } catch (const Error& e) {
            numerical_error(e.what());
        }
    });

    py::class_<GoldenScenario>(m, "Scenario")
        .def_property_readonly("name", [](const GoldenScenario& s) { return s.name; })
        .def_property_readonly("sup_bound",
                               [](const GoldenScenario& s) { return s.sup_bound(); })
        .def("perimeter", [](const GoldenScenario& s) { return s.set->perimeter(); })
        .def(
            "classify",
            [](const GoldenScenario& s, const Arr3& x) {
                return std::string(to_string(s.set->classify(to_vec(x))));
            },
            py::arg("point"))
        .def(
            "inner_normal",
            [](const GoldenScenario& s, const Arr3& x) {
                return from_vec(s.set->inner_normal(to_vec(x)));
            },
            py::arg("point"))
        .def(
            "sample_boundary",
            [](const GoldenScenario& s, std::size_t n, std::uint64_t seed) {
                py::list out;
                for (const SurfaceSample& sample : s.set->sample_boundary(n, seed)) {
                    py::dict d;
                    d["point"] = from_vec(sample.point);
                    d["inner_normal"] = from_vec(sample.inner_normal);
                    d["weight"] = sample.weight;
                    out.append(d);
                }
                return out;
            },
            py::arg("n"), py::arg("seed") = 42)
        .def(
            "interior_trace",
            [](const GoldenScenario& s, const Arr3& point, double r0, int levels,
               std::size_t samples, std::uint64_t seed) {
                return estimate_dict(run_trace(s, point, false, r0, levels, samples, seed));
            },
            py::arg("point"), py::arg("r0") = 0.0, py::arg("levels") = 6,
            py::arg("samples") = 200000, py::arg("seed") = 42)
        .def(
            "exterior_trace",
            [](const GoldenScenario& s, const Arr3& point, double r0, int levels,
               std::size_t samples, std::uint64_t seed) {
                return estimate_dict(run_trace(s, point, true, r0, levels, samples, seed));
            },
            py::arg("point"), py::arg("r0") = 0.0, py::arg("levels") = 6,
            py::arg("samples") = 200000, py::arg("seed") = 42)
        .def(
            "jump_density",
            [](const GoldenScenario& s, const Arr3& point) {
                return from_vec(jump_density(s.curl, *s.set, to_vec(point)));
            },
            py::arg("point"))
        .def(
            "closed_form_interior_trace",
            [](const GoldenScenario& s, const Arr3& point) -> py::object {
                if (!s.interior_trace) return py::none();
                return py::cast(from_vec(s.interior_trace(to_vec(point))));
            },
            py::arg("point"))
        .def(
            "mollified_trace",
            [](const GoldenScenario& s, const Arr3& point, double eps0, int levels,
               std::size_t samples, std::uint64_t seed) {
                MollifyConfig cfg{eps0, levels, samples, seed};
                if (!(cfg.eps0 > 0.0)) cfg.eps0 = default_eps0(*s.set);
                return from_vec(
                    mollified_boundary_trace(s.field, *s.set, to_vec(point), cfg, s.working_box));
            },
            py::arg("point"), py::arg("eps0") = 0.0, py::arg("levels") = 7,
            py::arg("samples") = 50000, py::arg("seed") = 42);

    m.def(
        "half_space",
        [](const Arr3& F1, const Arr3& F2) { return golden_half_space(to_vec(F1), to_vec(F2)); },
        py::arg("F1") = Arr3{1, 0, 0}, py::arg("F2") = Arr3{0, 1, 0});
    m.def("ball", &golden_ball);
    m.def("cube", &golden_cube);
    m.def(
        "cube_gradient",
        [](const Arr3& coeffs) {
            return perturb_with_gradient(golden_cube(), GradientField::linear(to_vec(coeffs)));
        },
        py::arg("coeffs") = Arr3{1, 0, 0});

    m.def("list_scenarios", [] {
        py::list out;
        for (const ScenarioInfo& s : builtin_scenarios()) {
            py::dict d;
            d["name"] = s.name;
            d["anchor"] = s.anchor;
            out.append(d);
        }
        return out;
    });

    m.def(
        "mollifier_mass",
        [](std::size_t n, std::uint64_t seed) { return mollifier_mass_check(n, seed); },
        py::arg("n") = 4096, py::arg("seed") = 42);

    m.def(
        "trace_csv",
        [](const std::string& config_json) { return run_trace_csv(parse_run_config(config_json)); },
        py::arg("config_json"), "Trace-table CSV for a JSON run configuration (byte-stable).");

    m.def(
        "check",
        [](const std::string& config_json) {
            const CheckOutput out = run_check(parse_run_config(config_json));
            py::dict d;
            d["report_json"] = out.report_json;
            d["trace_csv"] = out.trace_csv;
            d["pass"] = out.all_pass;
            return d;
        },
        py::arg("config_json"), "Run the verification suite for a JSON run configuration.");
}
