// Acceptance suite: runs every scenario-level criterion at its pinned
// tolerance with the default sample budget (2e5 Monte Carlo samples per
// integral, fixed seeds) and prints one pass/fail line per criterion.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "curltrace/rng.hpp"
#include "curltrace/runner.hpp"
#include "curltrace/scenarios.hpp"
#include "curltrace/trace.hpp"
#include "curltrace/verify.hpp"
#include "oracles.hpp"

using namespace curltrace;

namespace {

const Box kBox{};
const double kPi = std::numbers::pi;
int g_failures = 0;

void report(const std::string& id, bool pass, double measured, double tolerance,
            const std::string& detail) {
    if (!pass) ++g_failures;
    std::printf("[%s] %-4s %-52s measured=%.3e tol=%.3e\n", pass ? "PASS" : "FAIL", id.c_str(),
                detail.c_str(), measured, tolerance);
    std::fflush(stdout);
}

struct SweepData {
    std::vector<SurfaceSample> samples;
    std::vector<TraceRow> rows;
};

SweepData sweep(const GoldenScenario& s, std::size_t points, std::uint64_t seed) {
    TraceConfig cfg;
    cfg.r0 = default_r0(*s.set);
    cfg.seed = seed;
    SweepData data;
    data.rows = trace_table(s, points, cfg);
    data.samples = s.set->sample_boundary(points, derive_seed(cfg.seed, tag("trace-sweep")));
    return data;
}

double max_comp_error(const Vec3& a, const Vec3& b) { return norm_inf(a - b); }

}  // namespace

int main() {
    const GoldenScenario hs = golden_half_space({1, 0, 0}, {0, 1, 0});
    const GoldenScenario ball = golden_ball();
    const GoldenScenario cube = golden_cube();
    const QuadConfig quad{200000, 2000, 42};

    // ---- C1: half-space traces, jump, and mean trace -----------------
    const SweepData hs_sweep = sweep(hs, 50, 42);
    {
        const double tol = 2e-2 * (1.0 + hs.sup_bound());
        double e_int = 0, e_ext = 0, e_jump = 0, e_q0 = 0;
        for (const TraceRow& row : hs_sweep.rows) {
            e_int = std::max(e_int, max_comp_error(row.trace_i, {0, -1, 0}));
            e_ext = std::max(e_ext, max_comp_error(row.trace_e, {1, 0, 0}));
            e_jump = std::max(e_jump, max_comp_error(row.jump, {1, 1, 0}));
            e_q0 = std::max(e_q0, max_comp_error(row.q0, {0.5, -0.5, 0}));
        }
        const double worst = std::max({e_int, e_ext, e_jump, e_q0});
        report("C1", worst <= tol && hs_sweep.rows.size() >= 50, worst, tol,
               "half-space traces F1 x nu / F2 x nu, jump, mean trace at 50 points");
    }

    // ---- C2: ball jump density, latitude magnitude, Lipschitz check --
    const SweepData ball_sweep = sweep(ball, 100, 42);
    {
        double e_jump = 0, e_mag = 0;
        for (const TraceRow& row : ball_sweep.rows) {
            const Vec3& p = row.point;
            const Vec3 expected{-p.x * p.z, -p.y * p.z, 1 - p.z * p.z};
            e_jump = std::max(e_jump, max_comp_error(row.jump, expected));
            e_mag = std::max(e_mag,
                             std::abs(norm(row.jump) - std::sqrt(1 - p.z * p.z)));
        }
        report("C2a", e_jump <= 2e-2 && ball_sweep.rows.size() == 100, e_jump, 2e-2,
               "ball jump matches (-xz, -yz, 1 - z^2) at 100 points");
        report("C2b", e_mag <= 2e-2, e_mag, 2e-2, "|jump| = sqrt(1 - z^2) per latitude");

        const VectorField inside_field =
            VectorField::smooth([](const Vec3& p) { return Vec3{-p.y, p.x, 0.0}; },
                                std::sqrt(32.0))
                .with_curl_density([](const Vec3&) { return Vec3{0, 0, 2}; });
        const double lip_residual = lipschitz_global_check(inside_field, *ball.set, kBox, quad);
        const double lip_tol = 5e-2 * 8.0 * kPi / 3.0;
        report("C2c", lip_residual <= lip_tol, lip_residual, lip_tol,
               "volume curl of the inside field equals its boundary integral");
    }

    // ---- C3: cube traces ---------------------------------------------
    const SweepData cube_sweep = sweep(cube, 60, 42);
    {
        const double tol_s = 3e-2;
        const double tol_faces = 2e-2 * (1.0 + cube.sup_bound());
        double e_s = 0, e_faces = 0;
        std::size_t on_s = 0;
        for (std::size_t i = 0; i < cube_sweep.rows.size(); ++i) {
            const TraceRow& row = cube_sweep.rows[i];
            const double plane = row.point.x + row.point.y + row.point.z;
            if (std::abs(plane) <= 1e-12) {
                if (on_s++ < 10) e_s = std::max(e_s, norm(row.trace_i));
            } else {
                const Vec3 expected = cross(cube.field.eval(row.point), row.nu);
                e_faces = std::max(e_faces, max_comp_error(row.trace_i, expected));
            }
        }
        report("C3a", e_s <= tol_s && on_s >= 10, e_s, tol_s,
               "interior trace vanishes on the singular face (10 points)");
        report("C3b", e_faces <= tol_faces, e_faces, tol_faces,
               "interior trace is F(a) x nu on the other faces");

        Vec3 surface_total{0, 0, 0};
        for (std::size_t i = 0; i < cube_sweep.rows.size(); ++i) {
            surface_total += cube_sweep.rows[i].trace_i * cube_sweep.samples[i].weight;
        }
        report("C3c", norm(surface_total) <= 5e-2, norm(surface_total), 5e-2,
               "surface integral of the numeric interior trace vanishes");
    }

    // ---- C4: tangential property across all scenarios ----------------
    {
        bool pass = true;
        double worst_ratio = 0;
        const std::pair<const SweepData*, const GoldenScenario*> sweeps[] = {
            {&hs_sweep, &hs}, {&ball_sweep, &ball}, {&cube_sweep, &cube}};
        for (const auto& [data, scenario] : sweeps) {
            const double tol = 2e-2 * (1.0 + scenario->sup_bound());
            for (const TraceRow& row : data->rows) {
                const double defect = std::max(row.defect_i, row.defect_e);
                worst_ratio = std::max(worst_ratio, defect / tol);
                pass = pass && defect <= tol;
            }
        }
        report("C4", pass, worst_ratio, 1.0,
               "max tangential defect / tolerance over all scenarios and sides");
    }

    // ---- C5 + C6: Gauss-Green and antisymmetry over the family -------
    {
        double worst_gg = 0, worst_anti = 0;
        for (const GoldenScenario* s : {&hs, &ball, &cube}) {
            const auto family = default_test_family(*s, 42);
            const double scale = 1.0 + s->sup_bound();
            for (const TestFunction& phi : family) {
                const double tol = 2e-2 * scale * (1.0 + phi.lipschitz_bound());
                for (SideSelector side :
                     {SideSelector::InteriorSide, SideSelector::ExteriorSide}) {
                    worst_gg = std::max(
                        worst_gg, gauss_green_residual(*s, side, phi, quad) / tol);
                }
                const Vec3 ext = trace_pairing(s->field, s->curl, *s->set,
                                               SideSelector::ExteriorSide, phi, kBox, quad)
                                     .value;
                const Vec3 comp = trace_pairing(s->field, s->curl, *s->set,
                                                SideSelector::Complement, phi, kBox, quad)
                                      .value;
                worst_anti = std::max(worst_anti, norm(ext + comp) / tol);
            }
        }
        report("C5", worst_gg <= 1.0, worst_gg, 1.0,
               "Gauss-Green residual / tolerance, both sides, 6 test functions");
        report("C6", worst_anti <= 1.0, worst_anti, 1.0,
               "exterior + complement pairing / tolerance");
    }

    // ---- C7: product rule --------------------------------------------
    {
        const VectorField aux =
            VectorField::smooth([](const Vec3& p) { return Vec3{-p.y, p.x, 0.0}; },
                                std::sqrt(32.0))
                .with_curl_density([](const Vec3&) { return Vec3{0, 0, 2}; });
        const PiecewiseScalar g_smooth = PiecewiseScalar::smooth(
            [](const Vec3& p) { return std::sin(p.x) * std::cos(0.7 * p.y) + 0.3 * p.z; },
            [](const Vec3& p) -> Vec3 {
                return {std::cos(p.x) * std::cos(0.7 * p.y),
                        -0.7 * std::sin(p.x) * std::sin(0.7 * p.y), 0.3};
            });
        double worst = 0;
        for (const TestFunction& phi : default_test_family(ball, 42)) {
            const double tol =
                2e-2 * (1.0 + std::sqrt(32.0)) * (1.0 + phi.lipschitz_bound()) * 2.5;
            worst = std::max(worst, norm(product_rule_residual(aux, g_smooth, phi, kBox, quad)) /
                                        tol);
        }
        report("C7a", worst <= 1.0, worst, 1.0, "product rule, smooth g and smooth field");

        const PiecewiseScalar chi = PiecewiseScalar::indicator(hs.set);
        double worst_chi = 0;
        for (const TestFunction& phi : default_test_family(hs, 42)) {
            const double tol = 2e-2 * (1.0 + hs.sup_bound()) * (1.0 + phi.lipschitz_bound()) * 2.0;
            worst_chi = std::max(
                worst_chi, norm(product_rule_residual(hs.field, chi, phi, kBox, quad)) / tol);
        }
        report("C7b", worst_chi <= 1.0, worst_chi, 1.0,
               "product rule, g = chi_E on the half-space scenario");
    }

    // ---- C8: total curl of the truncated rotation field --------------
    {
        const VectorField truncated =
            VectorField::piecewise(ball.set,
                                   VectorField::smooth(
                                       [](const Vec3& p) {
                                           return Vec3{-p.y, p.x, 0};
                                       },
                                       1.0)
                                       .with_curl_density([](const Vec3&) { return Vec3{0, 0, 2}; }),
                                   VectorField::constant({0, 0, 0}))
                .with_support({0, 0, 0}, 1.0);
        const double total = norm(compact_support_total(truncated, kBox, quad));
        report("C8", total <= 3e-2, total, 3e-2,
               "total curl measure of the truncated rotation field");
    }

    // ---- C9: half-ball normalization for constant fields -------------
    {
        const Vec3 c{0.5, -1.0, 0.75};
        const VectorField constant = VectorField::constant(c);
        TraceConfig cfg;
        cfg.r0 = default_r0(*ball.set);
        cfg.seed = 42;
        const auto radii = cfg.schedule();
        double worst = 0;
        bool pass = true;
        for (const auto& probe : ball.set->sample_boundary(4, 7)) {
            const TraceEstimate est =
                interior_trace_at(constant, *ball.set, probe.point, radii,
                                  cfg.samples_per_radius, derive_seed(42, tag("c9")), kBox);
            const Vec3 expected = cross(c, est.inner_normal);
            for (std::size_t k = 0; k < est.values.size(); ++k) {
                const double err = norm(est.values[k] - expected);
                pass = pass && err <= 3.0 * est.mc_errors[k];
                worst = std::max(worst, err - 3.0 * est.mc_errors[k]);
            }
        }
        report("C9", pass, worst, 0.0,
               "constant-field half-ball average = c x nu within 3 MC sigmas at every level");
    }

    // ---- C10: one-sided mollification limits --------------------------
    {
        MollifyConfig mollify;
        mollify.eps0 = default_eps0(*ball.set);
        mollify.samples = 200000;
        mollify.seed = 42;
        const double eps = mollify.schedule().back();
        const Vec3 b{1, 0, 0};
        const TestFunction phi = TestFunction::bump(b, 1.5);
        const Vec3 x_int = b + Vec3{-0.25, 0, 0};
        const Vec3 x_ext = b + Vec3{0.5, 0, 0};  // farther than eps from E
        const double v_int =
            one_sided_mollify(phi, *ball.set, eps, x_int, mollify.samples, 1, kBox);
        const double v_bnd =
            one_sided_mollify(phi, *ball.set, eps, b, mollify.samples, 2, kBox);
        const double v_ext =
            one_sided_mollify(phi, *ball.set, eps, x_ext, mollify.samples, 3, kBox);
        const double worst =
            std::max({std::abs(v_int - phi(x_int)) / phi(x_int),
                      std::abs(v_bnd - 0.5 * phi(b)) / (0.5 * phi(b)), std::abs(v_ext) / phi(b)});
        report("C10", worst <= 2e-2, worst, 2e-2,
               "one-sided mollification limits phi, phi/2, 0 at the finest eps");
    }

    // ---- C11: smooth-field convergence order ---------------------------
    {
        const VectorField linear = VectorField::smooth(
            [](const Vec3& p) { return Vec3{-p.y, p.x, 0.0}; }, std::sqrt(32.0));
        TraceConfig cfg;
        cfg.r0 = default_r0(*ball.set);
        cfg.seed = 42;
        const auto radii = cfg.schedule();
        double min_order = 10.0;
        for (const auto& probe : ball.set->sample_boundary(3, 17)) {
            const TraceEstimate est =
                interior_trace_at(linear, *ball.set, probe.point, radii,
                                  cfg.samples_per_radius, derive_seed(42, tag("c11")), kBox);
            const Vec3 truth = cross(linear.eval(est.point), est.inner_normal);
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            const double n = static_cast<double>(est.values.size());
            for (std::size_t k = 0; k < est.values.size(); ++k) {
                const double lx = std::log(est.radii[k]);
                const double ly = std::log(std::max(norm(est.values[k] - truth), 1e-14));
                sx += lx;
                sy += ly;
                sxx += lx * lx;
                sxy += lx * ly;
            }
            min_order = std::min(min_order, (n * sxy - sx * sy) / (n * sxx - sx * sx));
        }
        report("C11", min_order >= 0.8, min_order, 0.8,
               "empirical order of the interior-trace error in the radius (linear field)");
    }

    // ---- C12: byte-identical outputs ----------------------------------
    {
        const std::string config = R"({
            "scenario": "ball",
            "seed": 42,
            "points": 48,
            "trace": {"levels": 4, "samples_per_radius": 20000},
            "quadrature": {"volume_samples": 60000, "surface_samples": 600},
            "mollify": {"levels": 4, "samples": 10000}
        })";
        const RunConfig run = parse_run_config(config);
        const bool csv_same = run_trace_csv(run) == run_trace_csv(run);
        const CheckOutput a = run_check(run);
        const CheckOutput b = run_check(run);
        const bool json_same = a.report_json == b.report_json && a.trace_csv == b.trace_csv;
        report("C12", csv_same && json_same, csv_same && json_same ? 0.0 : 1.0, 0.0,
               "repeated runs emit byte-identical CSV and JSON");
    }

    std::printf("%s: %d criterion failure(s)\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                g_failures);
    return g_failures == 0 ? 0 : 1;
}
