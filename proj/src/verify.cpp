#include "curltrace/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "curltrace/detail/mc.hpp"
#include "curltrace/errors.hpp"
#include "curltrace/rng.hpp"

#include "json.hpp"

namespace curltrace {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct BoundingBall {
    Vec3 center;
    double radius;
};

BoundingBall bounding_ball(const FinitePerimeterSet& set) {
    switch (set.kind()) {
        case FinitePerimeterSet::Kind::Ball:
            return {set.ball_center(), set.ball_radius()};
        case FinitePerimeterSet::Kind::Cube: {
            const double s = set.cube_side();
            const Vec3 center =
                set.cube_corner() + set.cube_rotation().apply({0.5 * s, 0.5 * s, 0.5 * s});
            return {center, 0.5 * s * std::sqrt(3.0)};
        }
        default:
            throw Error("bounding_ball: half-space is unbounded");
    }
}

Vec3 closed_form_trace(const GoldenScenario& scenario, SideSelector side, const Vec3& p) {
    switch (side) {
        case SideSelector::InteriorSide:
            return scenario.interior_trace(p);
        case SideSelector::ExteriorSide:
            return scenario.exterior_trace(p);
        default:
            return -scenario.exterior_trace(p);
    }
}

Vec3 numeric_trace(const GoldenScenario& scenario, SideSelector side, const Vec3& p,
                   const TraceConfig& cfg, std::uint64_t seed) {
    const auto radii = cfg.schedule();
    if (side == SideSelector::InteriorSide) {
        return interior_trace_at(scenario.field, *scenario.set, p, radii,
                                 cfg.samples_per_radius, seed, scenario.working_box)
            .extrapolated;
    }
    const Vec3 ext = exterior_trace_at(scenario.field, *scenario.set, p, radii,
                                       cfg.samples_per_radius, seed, scenario.working_box)
                         .extrapolated;
    return side == SideSelector::ExteriorSide ? ext : -ext;
}

}  // namespace

bool ScenarioReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckRecord& c) { return c.pass; });
}

VerifyConfig VerifyConfig::resolved(const GoldenScenario& scenario) const {
    VerifyConfig out = *this;
    if (!(out.trace.r0 > 0.0)) out.trace.r0 = default_r0(*scenario.set);
    if (!(out.mollify.eps0 > 0.0)) out.mollify.eps0 = default_eps0(*scenario.set);
    if (out.trace.seed == 0) out.trace.seed = derive_seed(out.seed, tag("trace"));
    if (out.quad.seed == 0) out.quad.seed = derive_seed(out.seed, tag("quad"));
    if (out.mollify.seed == 0) out.mollify.seed = derive_seed(out.seed, tag("mollify"));
    return out;
}

double gauss_green_residual(const GoldenScenario& scenario, SideSelector side,
                            const TestFunction& phi, const QuadConfig& quad, TraceSource source,
                            const std::optional<TraceConfig>& trace_cfg) {
    const bool closed = scenario.has_closed_form_traces();
    bool use_closed;
    switch (source) {
        case TraceSource::ClosedFormOnly:
            if (!closed) {
                throw NoTraceAvailableError("gauss_green_residual: no closed-form trace");
            }
            use_closed = true;
            break;
        case TraceSource::NumericOnly:
            use_closed = false;
            break;
        default:
            use_closed = closed;
    }

    TraceConfig tcfg = trace_cfg.value_or(TraceConfig{});
    if (!(tcfg.r0 > 0.0)) tcfg.r0 = default_r0(*scenario.set);

    // Numeric traces are expensive; cap the surface node count for them.
    const std::size_t n_surf =
        use_closed ? quad.surface_samples : std::min<std::size_t>(quad.surface_samples, 64);
    const auto samples =
        scenario.set->sample_boundary(n_surf, derive_seed(quad.seed, tag("gg-surface")));
    Vec3 lhs{0, 0, 0};
    std::uint64_t index = 0;
    for (const SurfaceSample& s : samples) {
        const Vec3 trace_value =
            use_closed ? closed_form_trace(scenario, side, s.point)
                       : numeric_trace(scenario, side, s.point, tcfg,
                                       derive_seed(quad.seed, tag("gg-numeric") + index++));
        lhs += trace_value * (phi(s.point) * s.weight);
    }
    const McVec3 rhs = trace_pairing(scenario.field, scenario.curl, *scenario.set, side, phi,
                                     scenario.working_box, quad);
    return norm(lhs - rhs.value);
}

double lipschitz_global_check(const VectorField& field, const FinitePerimeterSet& set,
                              const Box& box, const QuadConfig& quad) {
    if (!field.has_curl_density()) {
        throw Error("lipschitz_global_check: field needs a closed-form curl");
    }
    const BoundingBall bb = bounding_ball(set);
    if (!box.contains_ball(bb.center, bb.radius)) {
        throw OutsideDomainError("lipschitz_global_check: set exits the working box");
    }
    const McVec3 volume = detail::integrate_support_cube(
        bb.center, bb.radius, quad.volume_samples, derive_seed(quad.seed, tag("lipschitz-vol")),
        &field, [&](const Vec3& y) -> Vec3 {
            if (set.classify(y) != PointClass::Interior) return {0, 0, 0};
            return field.curl_density(y);
        });
    Vec3 surface{0, 0, 0};
    for (const SurfaceSample& s :
         set.sample_boundary(quad.surface_samples, derive_seed(quad.seed, tag("lipschitz-surf")))) {
        surface += cross(field.eval(s.point), s.inner_normal) * s.weight;
    }
    return norm(volume.value - surface);
}

TangentialSweep tangential_sweep(const GoldenScenario& scenario, std::size_t n_points,
                                 const TraceConfig& cfg) {
    TangentialSweep sweep;
    sweep.rows = trace_table(scenario, n_points, cfg);
    double sum = 0.0;
    std::size_t counted = 0;
    for (const TraceRow& row : sweep.rows) {
        if (row.flag.rfind("error:", 0) == 0) continue;
        const double defect = std::max(row.defect_i, row.defect_e);
        sweep.max_defect = std::max(sweep.max_defect, defect);
        sum += defect;
        ++counted;
    }
    sweep.mean_defect = counted ? sum / static_cast<double>(counted) : 0.0;
    return sweep;
}

Vec3 surface_integral_of_trace(const GoldenScenario& scenario, TraceSide which,
                               std::size_t n_samples, const QuadConfig& quad, TraceSource source,
                               const std::optional<TraceConfig>& trace_cfg) {
    const bool closed = scenario.has_closed_form_traces();
    bool use_closed;
    switch (source) {
        case TraceSource::ClosedFormOnly:
            if (!closed) {
                throw NoTraceAvailableError("surface_integral_of_trace: no closed-form trace");
            }
            use_closed = true;
            break;
        case TraceSource::NumericOnly:
            use_closed = false;
            break;
        default:
            use_closed = closed;
    }
    TraceConfig tcfg = trace_cfg.value_or(TraceConfig{});
    if (!(tcfg.r0 > 0.0)) tcfg.r0 = default_r0(*scenario.set);
    const SideSelector side = which == TraceSide::Interior ? SideSelector::InteriorSide
                                                           : SideSelector::ExteriorSide;
    Vec3 sum{0, 0, 0};
    std::uint64_t index = 0;
    for (const SurfaceSample& s : scenario.set->sample_boundary(
             n_samples, derive_seed(quad.seed, tag("trace-surface-integral")))) {
        const Vec3 trace_value =
            use_closed ? closed_form_trace(scenario, side, s.point)
                       : numeric_trace(scenario, side, s.point, tcfg,
                                       derive_seed(quad.seed, tag("tsi-numeric") + index++));
        sum += trace_value * s.weight;
    }
    return sum;
}

std::vector<TestFunction> default_test_family(const GoldenScenario& scenario,
                                              std::uint64_t seed) {
    const FinitePerimeterSet& set = *scenario.set;
    const double f = set.feature_size();
    Rng rng(derive_seed(seed, tag("test-family")));
    const auto anchors = set.sample_boundary(16, derive_seed(seed, tag("family-anchors")));

    std::vector<TestFunction> family;
    family.reserve(6);
    for (int i = 0; i < 5; ++i) {
        const SurfaceSample& s =
            anchors[static_cast<std::size_t>(rng.next_u64() % anchors.size())];
        Vec3 center = s.point;
        double radius;
        if (set.kind() == FinitePerimeterSet::Kind::HalfSpace) {
            // Keep the support footprint strictly inside the sampling window.
            const Vec3 n = set.half_space_normal();
            const Vec3 lateral = (center - n * dot(center, n)) * 0.3;
            const double offset = (rng.next_double() - 0.5) * 0.3 * f;
            radius = (0.40 + 0.10 * rng.next_double()) * f;
            center = lateral + n * offset;
        } else {
            const double offset = (rng.next_double() - 0.5) * 0.3 * f;
            radius = (0.4 + 0.4 * rng.next_double()) * f;
            center += s.inner_normal * offset;
        }
        family.push_back(TestFunction::bump(center, radius));
    }

    switch (set.kind()) {
        case FinitePerimeterSet::Kind::Ball:
            family.push_back(TestFunction::plateau(set.ball_center(), 1.2 * set.ball_radius(),
                                                   2.4 * set.ball_radius()));
            break;
        case FinitePerimeterSet::Kind::Cube: {
            const BoundingBall bb = bounding_ball(set);
            family.push_back(
                TestFunction::plateau(bb.center, 1.2 * bb.radius, 2.4 * bb.radius));
            break;
        }
        default: {
            const Vec3 n = set.half_space_normal();
            const Window& w = *set.window();
            const Vec3 c = w.center - n * (dot(n, w.center) - set.half_space_offset());
            family.push_back(TestFunction::plateau(c, 0.48 * w.half_side, 0.96 * w.half_side));
        }
    }
    return family;
}

namespace {

struct SuiteContext {
    const GoldenScenario& scenario;
    VerifyConfig cfg;  // resolved
    std::vector<CheckRecord>* checks;

    double base_tol() const { return 2e-2 * (1.0 + scenario.sup_bound()); }

    template <typename Fn>
    void run(const std::string& name, const std::string& anchor, double tolerance, Fn&& body) {
        const auto t0 = Clock::now();
        CheckRecord rec;
        rec.name = name;
        rec.anchor = anchor;
        rec.tolerance = tolerance;
        rec.residual = body();
        rec.pass = std::isfinite(rec.residual) && rec.residual <= tolerance;
        rec.runtime_ms = ms_since(t0);
        checks->push_back(std::move(rec));
    }
};

double check_boundary_samples(const GoldenScenario& sc, const VerifyConfig& cfg) {
    const auto samples =
        sc.set->sample_boundary(cfg.quad.surface_samples, derive_seed(cfg.seed, tag("geom")));
    double worst = 0.0;
    double weight_sum = 0.0;
    for (const SurfaceSample& s : samples) {
        worst = std::max(worst, std::abs(norm(s.inner_normal) - 1.0));
        if (sc.set->classify(s.point) != PointClass::ReducedBoundary) worst = std::max(worst, 1.0);
        if (sc.set->classify(s.point + s.inner_normal * 1e-4) != PointClass::Interior) {
            worst = std::max(worst, 1.0);
        }
        weight_sum += s.weight;
    }
    worst = std::max(worst, std::abs(weight_sum - sc.set->perimeter()) / sc.set->perimeter());
    if (sc.set->kind() == FinitePerimeterSet::Kind::Cube) {
        worst = std::max(worst, sc.set->cube_rotation().orthogonality_defect());
    }
    return worst;
}

double check_triple_product(const GoldenScenario& sc, const VerifyConfig& cfg) {
    const auto samples = sc.set->sample_boundary(64, derive_seed(cfg.seed, tag("triple")));
    double worst = 0.0;
    for (const SurfaceSample& s : samples) {
        if (!sc.field.defined_at(s.point)) continue;
        for (const Vec3& f : {sc.field.eval_inside(s.point), sc.field.eval_outside(s.point)}) {
            const Vec3 lhs = cross(s.inner_normal, cross(f, s.inner_normal));
            const Vec3 rhs = f - s.inner_normal * dot(s.inner_normal, f);
            worst = std::max(worst, norm(lhs - rhs));
        }
    }
    return worst;
}

double check_jump_density_tangential(const GoldenScenario& sc, const VerifyConfig& cfg) {
    const auto samples = sc.set->sample_boundary(128, derive_seed(cfg.seed, tag("q2tan")));
    double worst = 0.0;
    for (const SurfaceSample& s : samples) {
        const Vec3 q2 = jump_density(sc.curl, *sc.set, s.point);
        worst = std::max(worst, std::abs(dot(q2, s.inner_normal)));
    }
    return worst;
}

double check_mollifier_kernel(const VerifyConfig& cfg) {
    const Mollifier kernel;
    double worst = std::abs(mollifier_mass_check(4096, cfg.mollify.seed) - 1.0);
    Rng rng(derive_seed(cfg.mollify.seed, tag("kernel-pts")));
    for (int i = 0; i < 256; ++i) {
        const Vec3 y{rng.next_double() * 2.4 - 1.2, rng.next_double() * 2.4 - 1.2,
                     rng.next_double() * 2.4 - 1.2};
        const double eps = 0.1 + rng.next_double();
        const double scaled = kernel.density_scaled(y, eps);
        const double reference = kernel.density(y / eps) / (eps * eps * eps);
        worst = std::max(worst, std::abs(scaled - reference));
        worst = std::max(worst, std::abs(kernel.density(y) - kernel.density(-y)));
        if (kernel.density(y) < 0.0 || (norm(y) >= 1.0 && kernel.density(y) != 0.0)) {
            worst = std::max(worst, 1.0);
        }
    }
    return worst;
}

double check_one_sided_limits(const GoldenScenario& sc, const VerifyConfig& cfg) {
    const auto anchors = sc.set->sample_boundary(8, derive_seed(cfg.seed, tag("osm-anchor")));
    const SurfaceSample& b = anchors.front();
    const double f = sc.set->feature_size();
    const Vec3 x_int = b.point + b.inner_normal * (0.25 * f);
    const Vec3 x_ext = b.point - b.inner_normal * (0.25 * f);
    const TestFunction phi = TestFunction::bump(b.point, 1.5 * f);
    const double eps = cfg.mollify.schedule().back();

    const double v_int = one_sided_mollify(phi, *sc.set, eps, x_int, cfg.mollify.samples,
                                           derive_seed(cfg.mollify.seed, 1), sc.working_box);
    const double v_bnd = one_sided_mollify(phi, *sc.set, eps, b.point, cfg.mollify.samples,
                                           derive_seed(cfg.mollify.seed, 2), sc.working_box);
    const double v_ext = one_sided_mollify(phi, *sc.set, eps, x_ext, cfg.mollify.samples,
                                           derive_seed(cfg.mollify.seed, 3), sc.working_box);
    double worst = std::abs(v_int - phi(x_int)) / std::abs(phi(x_int));
    worst = std::max(worst, std::abs(v_bnd - 0.5 * phi(b.point)) / (0.5 * phi(b.point)));
    worst = std::max(worst, std::abs(v_ext) / phi(b.point));
    return worst;
}

double family_residual_max(const std::vector<TestFunction>& family,
                           const std::function<double(const TestFunction&)>& residual_of) {
    double worst = 0.0;
    for (const TestFunction& phi : family) {
        worst = std::max(worst, residual_of(phi) / (1.0 + phi.lipschitz_bound()));
    }
    return worst;
}

}  // namespace

ScenarioReport run_invariant_suite(const GoldenScenario& scenario, const VerifyConfig& raw_cfg) {
    const VerifyConfig cfg = raw_cfg.resolved(scenario);
    ScenarioReport report;
    report.scenario = scenario.name;
    SuiteContext ctx{scenario, cfg, &report.checks};
    const double base = ctx.base_tol();
    const Box& box = scenario.working_box;
    const auto family = default_test_family(scenario, cfg.seed);
    const bool bounded = scenario.set->kind() != FinitePerimeterSet::Kind::HalfSpace;

    ctx.run("geometry/boundary-samples",
            "unit inner normals on the reduced boundary, inward orientation, sum(w) = perimeter",
            1e-9, [&] { return check_boundary_samples(scenario, cfg); });

    ctx.run("fields/triple-product", "nu x (F x nu) = F - (nu . F) nu", 1e-12,
            [&] { return check_triple_product(scenario, cfg); });

    ctx.run("fields/jump-density-tangential", "q2 . nu = 0 on the reduced boundary", 1e-12,
            [&] { return check_jump_density_tangential(scenario, cfg); });

    ctx.run("mollify/kernel",
            "rho >= 0, supp rho in the unit ball, rho_eps(y) = eps^-3 rho(y/eps) = rho_eps(-y), "
            "mass 1",
            1e-6, [&] { return check_mollifier_kernel(cfg); });

    ctx.run("mollify/one-sided-limits",
            "phi_eps(x) -> phi(x), phi(x)/2, 0 for x interior, on the boundary, exterior", 2e-2,
            [&] { return check_one_sided_limits(scenario, cfg); });

    ctx.run("measure/curl-pairing-consistency",
            "integral of F x grad(phi) equals the pairing of phi with the closed-form curl "
            "measure",
            base, [&] {
                return family_residual_max(family, [&](const TestFunction& phi) {
                    const McVec3 lhs = curl_pairing(scenario.field, phi, box, cfg.quad);
                    const McVec3 rhs =
                        measure_pairing(scenario.curl, phi, std::nullopt, box, cfg.quad);
                    return norm(lhs.value - rhs.value);
                });
            });

    ctx.run("measure/antisymmetry",
            "<F x nu, phi> over E1 and the boundary = -<F x nu, phi> over E0", base, [&] {
                return family_residual_max(family, [&](const TestFunction& phi) {
                    // Common random numbers: the two regions partition the
                    // sample set, so the sum estimates the total pairing.
                    const McVec3 ext = trace_pairing(scenario.field, scenario.curl, *scenario.set,
                                                     SideSelector::ExteriorSide, phi, box,
                                                     cfg.quad);
                    const McVec3 comp = trace_pairing(scenario.field, scenario.curl, *scenario.set,
                                                      SideSelector::Complement, phi, box,
                                                      cfg.quad);
                    return norm(ext.value + comp.value);
                });
            });

    ctx.run("measure/jump-identity",
            "(Fe x nu - Fi x nu) matches Curl F restricted to the reduced boundary", base, [&] {
                return family_residual_max(family, [&](const TestFunction& phi) {
                    QuadConfig qa = cfg.quad;
                    qa.seed = derive_seed(cfg.quad.seed, tag("jump-ext"));
                    QuadConfig qb = cfg.quad;
                    qb.seed = derive_seed(cfg.quad.seed, tag("jump-int"));
                    const McVec3 ext = trace_pairing(scenario.field, scenario.curl, *scenario.set,
                                                     SideSelector::ExteriorSide, phi, box, qa);
                    const McVec3 inner = trace_pairing(scenario.field, scenario.curl,
                                                       *scenario.set, SideSelector::InteriorSide,
                                                       phi, box, qb);
                    Vec3 surface{0, 0, 0};
                    for (const SurfaceSample& s : scenario.set->sample_boundary(
                             cfg.quad.surface_samples, derive_seed(cfg.seed, tag("jump-q2")))) {
                        surface += jump_density(scenario.curl, *scenario.set, s.point) *
                                   (phi(s.point) * s.weight);
                    }
                    return norm(ext.value - inner.value - surface);
                });
            });

    // Trace sweep: reused by the tangential, jump-consistency and surface
    // integral checks, and exported as the per-point table.
    const TangentialSweep sweep = tangential_sweep(scenario, cfg.points, cfg.trace);
    report.trace_rows = sweep.rows;

    ctx.run("trace/tangential-property", "(Fi x nu) . nu = 0 and (Fe x nu) . nu = 0", base,
            [&] { return sweep.max_defect; });

    ctx.run("trace/jump-consistency",
            "exterior minus interior trace equals the surface density q2 pointwise", base, [&] {
                double worst = 0.0;
                for (const TraceRow& row : sweep.rows) {
                    if (row.flag.rfind("error:", 0) == 0) continue;
                    const Vec3 q2 = jump_density(scenario.curl, *scenario.set, row.point);
                    worst = std::max(worst, norm_inf(row.jump - q2));
                }
                return worst;
            });

    ctx.run("trace/q0-consistency", "lim of F_eps x nu equals (Fi x nu + Fe x nu) / 2", base,
            [&] {
                double worst = 0.0;
                const std::size_t n_probe = std::min<std::size_t>(sweep.rows.size(), 8);
                for (std::size_t i = 0; i < n_probe; ++i) {
                    const TraceRow& row = sweep.rows[i];
                    if (row.flag.rfind("error:", 0) == 0) continue;
                    const Vec3 mol = mollified_boundary_trace(scenario.field, *scenario.set,
                                                              row.point, cfg.mollify, box);
                    worst = std::max(worst, norm(mol - row.q0));
                }
                return worst;
            });

    ctx.run("trace/boundedness", "per-radius half-ball averages bounded by |F|_inf + 3 sigma",
            0.0, [&] {
                const auto radii = cfg.trace.schedule();
                const auto probes =
                    scenario.set->sample_boundary(4, derive_seed(cfg.seed, tag("bound-probes")));
                double worst = 0.0;
                for (std::size_t i = 0; i < probes.size(); ++i) {
                    for (const bool exterior : {false, true}) {
                        const TraceEstimate est =
                            exterior ? exterior_trace_at(scenario.field, *scenario.set,
                                                         probes[i].point, radii,
                                                         cfg.trace.samples_per_radius,
                                                         derive_seed(cfg.seed, 100 + i), box)
                                     : interior_trace_at(scenario.field, *scenario.set,
                                                         probes[i].point, radii,
                                                         cfg.trace.samples_per_radius,
                                                         derive_seed(cfg.seed, 200 + i), box);
                        for (std::size_t k = 0; k < est.values.size(); ++k) {
                            const double bound =
                                scenario.sup_bound() + 3.0 * est.std_error;
                            worst = std::max(worst, norm(est.values[k]) - bound);
                        }
                    }
                }
                return std::max(worst, 0.0);
            });

    ctx.run("trace/normalization",
            "for constant c the half-ball average is c x nu within 3 MC standard errors "
            "(omega_2 = pi)",
            0.0, [&] {
                const Vec3 c{0.5, -1.0, 0.75};
                const VectorField constant = VectorField::constant(c);
                const auto radii = cfg.trace.schedule();
                const auto probes =
                    scenario.set->sample_boundary(4, derive_seed(cfg.seed, tag("norm-probes")));
                double worst = 0.0;
                for (std::size_t i = 0; i < probes.size(); ++i) {
                    const TraceEstimate est = interior_trace_at(
                        constant, *scenario.set, probes[i].point, radii,
                        cfg.trace.samples_per_radius, derive_seed(cfg.seed, 300 + i), box);
                    const Vec3 expected = cross(c, est.inner_normal);
                    for (std::size_t k = 0; k < est.values.size(); ++k) {
                        worst = std::max(worst, norm(est.values[k] - expected) -
                                                    3.0 * est.mc_errors[k]);
                    }
                }
                return std::max(worst, 0.0);
            });

    if (scenario.set->kind() == FinitePerimeterSet::Kind::Ball) {
        ctx.run("trace/smooth-order",
                "interior-trace error for a linear field decreases in the max radius with "
                "order >= 0.8",
                0.0, [&] {
                    const VectorField linear = VectorField::smooth(
                        [](const Vec3& p) { return Vec3{-p.y, p.x, 0.0}; }, std::sqrt(32.0));
                    const auto radii = cfg.trace.schedule();
                    const auto probes = scenario.set->sample_boundary(
                        3, derive_seed(cfg.seed, tag("order-probes")));
                    double min_order = 10.0;
                    for (std::size_t i = 0; i < probes.size(); ++i) {
                        const TraceEstimate est = interior_trace_at(
                            linear, *scenario.set, probes[i].point, radii,
                            cfg.trace.samples_per_radius, derive_seed(cfg.seed, 400 + i), box);
                        const Vec3 truth =
                            cross(linear.eval(est.point), est.inner_normal);
                        double sx = 0, sy = 0, sxx = 0, sxy = 0;
                        const double n = static_cast<double>(est.values.size());
                        for (std::size_t k = 0; k < est.values.size(); ++k) {
                            const double lx = std::log(est.radii[k]);
                            const double ly =
                                std::log(std::max(norm(est.values[k] - truth), 1e-14));
                            sx += lx;
                            sy += ly;
                            sxx += lx * lx;
                            sxy += lx * ly;
                        }
                        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
                        min_order = std::min(min_order, slope);
                    }
                    return std::max(0.0, 0.8 - min_order);
                });
    }

    ctx.run("gauss-green/interior",
            "int phi (Fi x nu) dH2 = int_{E1} phi d(Curl F) - int_E F x grad(phi)", base, [&] {
                return family_residual_max(family, [&](const TestFunction& phi) {
                    return gauss_green_residual(scenario, SideSelector::InteriorSide, phi,
                                                cfg.quad);
                });
            });

    ctx.run("gauss-green/exterior",
            "int phi (Fe x nu) dH2 = int over E1 and the boundary of phi d(Curl F) - "
            "int_E F x grad(phi)",
            base, [&] {
                return family_residual_max(family, [&](const TestFunction& phi) {
                    return gauss_green_residual(scenario, SideSelector::ExteriorSide, phi,
                                                cfg.quad);
                });
            });

    ctx.run("product-rule/smooth", "Curl(gF) = g* Curl F - (F x grad g) for smooth g and F",
            2e-2 * (1.0 + std::sqrt(32.0)) * 2.5, [&] {
                const VectorField aux =
                    VectorField::smooth([](const Vec3& p) { return Vec3{-p.y, p.x, 0.0}; },
                                        std::sqrt(32.0))
                        .with_curl_density([](const Vec3&) { return Vec3{0, 0, 2}; });
                const PiecewiseScalar g = PiecewiseScalar::smooth(
                    [](const Vec3& p) { return std::sin(p.x) * std::cos(0.7 * p.y) + 0.3 * p.z; },
                    [](const Vec3& p) -> Vec3 {
                        return {std::cos(p.x) * std::cos(0.7 * p.y),
                                -0.7 * std::sin(p.x) * std::sin(0.7 * p.y), 0.3};
                    });
                double worst = 0.0;
                for (const TestFunction& phi : family) {
                    const Vec3 r = product_rule_residual(aux, g, phi, box, cfg.quad);
                    worst = std::max(worst, norm(r) / (1.0 + phi.lipschitz_bound()));
                }
                return worst;
            });

    if (scenario.set->kind() == FinitePerimeterSet::Kind::HalfSpace) {
        ctx.run("product-rule/indicator",
                "g = chi_E reproduces chi_{E1} Curl F - (Fi x nu) on the boundary", 2.0 * base,
                [&] {
                    const PiecewiseScalar g = PiecewiseScalar::indicator(scenario.set);
                    double worst = 0.0;
                    for (const TestFunction& phi : family) {
                        const Vec3 r =
                            product_rule_residual(scenario.field, g, phi, box, cfg.quad);
                        worst = std::max(worst, norm(r) / (1.0 + phi.lipschitz_bound()));
                    }
                    return worst;
                });
    }

    if (scenario.set->kind() == FinitePerimeterSet::Kind::Ball) {
        ctx.run("compact-support/total", "compactly supported F has Curl F(Omega) = 0", 3e-2,
                [&] {
                    const VectorField truncated =
                        VectorField::piecewise(
                            scenario.set,
                            VectorField::smooth([](const Vec3& p) { return Vec3{-p.y, p.x, 0}; },
                                                1.0)
                                .with_curl_density([](const Vec3&) { return Vec3{0, 0, 2}; }),
                            VectorField::constant({0, 0, 0}))
                            .with_support(scenario.set->ball_center(),
                                          scenario.set->ball_radius());
                    return norm(compact_support_total(truncated, box, cfg.quad));
                });
    }

    if (bounded) {
        ctx.run("lipschitz/global", "int_E Curl F dL3 = int F x nu dH2 for Lipschitz F",
                5e-2 * 8.0 * std::numbers::pi / 3.0, [&] {
                    const VectorField lip =
                        VectorField::smooth([](const Vec3& p) { return Vec3{-p.y, p.x, 0.0}; },
                                            std::sqrt(32.0))
                            .with_curl_density([](const Vec3&) { return Vec3{0, 0, 2}; });
                    return lipschitz_global_check(lip, *scenario.set, box, cfg.quad);
                });

        const double total_scale =
            scenario.curl.has_volume_density() ? 8.0 * std::numbers::pi / 3.0 : 1.0;
        ctx.run("surface-integral/gauss-green-total",
                "int over the boundary of (Fi x nu) dH2 = int_E Curl F dL3",
                5e-2 * total_scale, [&] {
                    // Numeric traces from the sweep rows; closed-form volume side.
                    const auto samples = scenario.set->sample_boundary(
                        cfg.points, derive_seed(cfg.trace.seed, tag("trace-sweep")));
                    Vec3 lhs{0, 0, 0};
                    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
                        if (sweep.rows[i].flag.rfind("error:", 0) == 0) continue;
                        lhs += sweep.rows[i].trace_i * samples[i].weight;
                    }
                    Vec3 rhs{0, 0, 0};
                    if (scenario.curl.has_volume_density()) {
                        const BoundingBall bb = bounding_ball(*scenario.set);
                        rhs = detail::integrate_support_cube(
                                  bb.center, bb.radius, cfg.quad.volume_samples,
                                  derive_seed(cfg.quad.seed, tag("gg-total-vol")), nullptr,
                                  [&](const Vec3& y) -> Vec3 {
                                      if (scenario.set->classify(y) != PointClass::Interior) {
                                          return {0, 0, 0};
                                      }
                                      return scenario.curl.volume_density(y);
                                  })
                                  .value;
                    }
                    return norm(lhs - rhs);
                });
    }

    return report;
}

std::string report_json(const ScenarioReport& report, const std::string& trace_csv_path) {
    nlohmann::ordered_json doc;
    doc["scenario"] = report.scenario;
    doc["pass"] = report.all_pass();
    doc["checks"] = nlohmann::ordered_json::array();
    for (const CheckRecord& c : report.checks) {
        nlohmann::ordered_json rec;
        rec["name"] = c.name;
        rec["anchor"] = c.anchor;
        rec["residual"] = c.residual;
        rec["tol"] = c.tolerance;
        rec["pass"] = c.pass;
        doc["checks"].push_back(std::move(rec));
    }
    doc["trace_table_csv"] = trace_csv_path;
    return doc.dump(2) + "\n";
}

}  // namespace curltrace
