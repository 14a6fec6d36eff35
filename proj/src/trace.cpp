#include "curltrace/trace.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <numbers>
#include <thread>

#include "curltrace/detail/mc.hpp"
#include "curltrace/errors.hpp"
#include "curltrace/rng.hpp"

namespace curltrace {

std::vector<double> TraceConfig::schedule() const {
    std::vector<double> radii;
    radii.reserve(static_cast<std::size_t>(levels));
    double r = r0;
    for (int k = 0; k < levels; ++k, r *= 0.5) radii.push_back(r);
    return radii;
}

double default_r0(const FinitePerimeterSet& set) { return 0.1 * set.feature_size(); }
double default_eps0(const FinitePerimeterSet& set) { return 0.2 * set.feature_size(); }

RichardsonFit richardson_extrapolate(const std::vector<double>& radii,
                                     const std::vector<Vec3>& values) {
    const std::size_t n = radii.size();
    if (n < 3 || values.size() != n) {
        throw InsufficientLevelsError("richardson_extrapolate: need >= 3 levels");
    }
    for (std::size_t k = 1; k < n; ++k) {
        if (!(radii[k] < radii[k - 1]) || !(radii[k] > 0.0)) {
            throw InsufficientLevelsError(
                "richardson_extrapolate: radii must be strictly decreasing and positive");
        }
    }

    const double dn = static_cast<double>(n);
    double sum_r = 0.0, sum_rr = 0.0;
    for (double r : radii) {
        sum_r += r;
        sum_rr += r * r;
    }
    const double mean_r = sum_r / dn;
    const double s_rr = sum_rr - dn * mean_r * mean_r;

    RichardsonFit fit;
    Vec3 rms{0, 0, 0};
    Vec3 se{0, 0, 0};
    Vec3 range_lo = values[0];
    Vec3 range_hi = values[0];
    double comp_value[3];
    for (int c = 0; c < 3; ++c) {
        double sum_v = 0.0, sum_rv = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double v = values[k][static_cast<std::size_t>(c)];
            sum_v += v;
            sum_rv += radii[k] * v;
        }
        const double mean_v = sum_v / dn;
        const double slope = (sum_rv - dn * mean_r * mean_v) / s_rr;
        const double intercept = mean_v - slope * mean_r;
        comp_value[c] = intercept;
        double ssr = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double e = values[k][static_cast<std::size_t>(c)] -
                             (intercept + slope * radii[k]);
            ssr += e * e;
        }
        const double sigma2 = n > 2 ? ssr / (dn - 2.0) : 0.0;
        const double se_c = std::sqrt(std::max(sigma2, 0.0) * (1.0 / dn + mean_r * mean_r / s_rr));
        const double rms_c = std::sqrt(ssr / dn);
        switch (c) {
            case 0:
                rms.x = rms_c;
                se.x = se_c;
                break;
            case 1:
                rms.y = rms_c;
                se.y = se_c;
                break;
            default:
                rms.z = rms_c;
                se.z = se_c;
        }
    }
    for (const Vec3& v : values) {
        range_lo = {std::min(range_lo.x, v.x), std::min(range_lo.y, v.y),
                    std::min(range_lo.z, v.z)};
        range_hi = {std::max(range_hi.x, v.x), std::max(range_hi.y, v.y),
                    std::max(range_hi.z, v.z)};
    }
    fit.value = {comp_value[0], comp_value[1], comp_value[2]};
    fit.fit_residual = norm(rms);
    fit.spread = norm(range_hi - range_lo);
    fit.error = norm(se);
    // Floating-point floor: bit-identical values give spread 0 but a fit
    // residual at rounding level, which must not read as a bad fit.
    double scale = 0.0;
    for (const Vec3& v : values) scale = std::max(scale, norm_inf(v));
    const double floor = 1e-12 * (1.0 + scale);
    if (fit.fit_residual > fit.spread + floor) {
        fit.value = values.back();
        fit.error = fit.spread;
        fit.fallback = true;
    }
    return fit;
}

McVec3 half_ball_integral(const VectorField& field, const Vec3& x, const Vec3& nu, double r,
                          std::size_t n, std::uint64_t seed, const Box& box) {
    if (!box.contains_ball(x, r)) {
        throw OutsideDomainError("half_ball_integral: B(x, r) exits the working box");
    }
    return detail::integrate_half_ball(
        x, nu, r, n, seed, &field,
        [&](const Vec3& y, const Vec3& dir) { return cross(field.eval(y), dir); });
}

namespace {

TraceEstimate trace_at(const VectorField& field, const FinitePerimeterSet& set, const Vec3& x,
                       const std::vector<double>& radii, std::size_t samples, std::uint64_t seed,
                       const Box& box, bool exterior) {
    if (radii.empty()) throw InsufficientLevelsError("trace: empty radius schedule");
    TraceEstimate est;
    est.point = x;
    est.inner_normal = set.inner_normal(x);
    est.radii = radii;
    const Vec3 axis = exterior ? -est.inner_normal : est.inner_normal;
    const double sign = exterior ? -1.0 : 1.0;
    est.values.reserve(radii.size());
    est.mc_errors.reserve(radii.size());
    double max_sigma = 0.0;
    for (double r : radii) {
        // Same seed at every radius: common random numbers across the
        // schedule, which the extrapolation relies on.
        const McVec3 integral = half_ball_integral(field, x, axis, r, samples, seed, box);
        const double scale = 3.0 / (std::numbers::pi * r * r * r);
        est.values.push_back(integral.value * (sign * scale));
        est.mc_errors.push_back(integral.std_error * scale);
        max_sigma = std::max(max_sigma, integral.std_error * scale);
    }
    const RichardsonFit fit = richardson_extrapolate(est.radii, est.values);
    est.extrapolated = fit.value;
    est.std_error = std::max(fit.error, max_sigma);
    double value_scale = 0.0;
    for (const Vec3& v : est.values) value_scale = std::max(value_scale, norm_inf(v));
    if (fit.fit_residual > 10.0 * fit.spread + 1e-12 * (1.0 + value_scale)) {
        // Unstable limit: report the convention value 0 and flag it.
        est.extrapolated = {0, 0, 0};
        est.limit_unstable = true;
    }
    est.tangential_defect = std::abs(dot(est.extrapolated, est.inner_normal));
    return est;
}

}  // namespace

TraceEstimate interior_trace_at(const VectorField& field, const FinitePerimeterSet& set,
                                const Vec3& x, const std::vector<double>& radii,
                                std::size_t samples_per_radius, std::uint64_t seed,
                                const Box& box) {
    return trace_at(field, set, x, radii, samples_per_radius, seed, box, false);
}

TraceEstimate exterior_trace_at(const VectorField& field, const FinitePerimeterSet& set,
                                const Vec3& x, const std::vector<double>& radii,
                                std::size_t samples_per_radius, std::uint64_t seed,
                                const Box& box) {
    return trace_at(field, set, x, radii, samples_per_radius, seed, box, true);
}

namespace {

void require_same_point(const TraceEstimate& a, const TraceEstimate& b) {
    if (norm(a.point - b.point) > 1e-12 || norm(a.inner_normal - b.inner_normal) > 1e-12) {
        throw PointMismatchError("trace estimates refer to different points or normals");
    }
}

}  // namespace

Vec3 mean_trace_q0(const TraceEstimate& interior, const TraceEstimate& exterior) {
    require_same_point(interior, exterior);
    return (interior.extrapolated + exterior.extrapolated) * 0.5;
}

Vec3 jump_from_traces(const TraceEstimate& interior, const TraceEstimate& exterior) {
    require_same_point(interior, exterior);
    return exterior.extrapolated - interior.extrapolated;
}

Vec3 mollified_boundary_trace(const VectorField& field, const FinitePerimeterSet& set,
                              const Vec3& x, const MollifyConfig& cfg, const Box& box) {
    const Vec3 nu = set.inner_normal(x);
    const std::vector<double> eps = cfg.schedule();
    std::vector<Vec3> values;
    values.reserve(eps.size());
    for (double e : eps) {
        const McVec3 mf = mollify_field(field, e, x, cfg.samples, cfg.seed, box);
        values.push_back(cross(mf.value, nu));
    }
    return richardson_extrapolate(eps, values).value;
}

namespace {

void run_parallel(std::size_t count, const std::function<void(std::size_t)>& work) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(hw, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) work(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace

std::vector<TraceRow> trace_table(const GoldenScenario& scenario, std::size_t n_points,
                                  const TraceConfig& cfg) {
    const auto samples =
        scenario.set->sample_boundary(n_points, derive_seed(cfg.seed, tag("trace-sweep")));
    const std::vector<double> radii = cfg.schedule();
    std::vector<TraceRow> rows(samples.size());
    std::atomic<std::size_t> failures{0};
    run_parallel(samples.size(), [&](std::size_t i) {
        TraceRow& row = rows[i];
        row.point = samples[i].point;
        row.nu = samples[i].inner_normal;
        const std::uint64_t point_seed = derive_seed(cfg.seed, tag("trace-point") + i);
        try {
            const TraceEstimate ti =
                interior_trace_at(scenario.field, *scenario.set, samples[i].point, radii,
                                  cfg.samples_per_radius, point_seed, scenario.working_box);
            const TraceEstimate te =
                exterior_trace_at(scenario.field, *scenario.set, samples[i].point, radii,
                                  cfg.samples_per_radius, derive_seed(point_seed, 1),
                                  scenario.working_box);
            row.trace_i = ti.extrapolated;
            row.trace_e = te.extrapolated;
            row.q0 = mean_trace_q0(ti, te);
            row.jump = jump_from_traces(ti, te);
            row.defect_i = ti.tangential_defect;
            row.defect_e = te.tangential_defect;
            row.std_error = std::max(ti.std_error, te.std_error);
            if (ti.limit_unstable || te.limit_unstable) row.flag = "limit-unstable";
        } catch (const EdgePointError&) {
            row.flag = "error:EdgePoint";
            failures.fetch_add(1);
        } catch (const OutsideDomainError&) {
            row.flag = "error:OutsideDomain";
            failures.fetch_add(1);
        } catch (const UndefinedPointError&) {
            row.flag = "error:UndefinedPoint";
            failures.fetch_add(1);
        } catch (const Error&) {
            row.flag = "error:Numerical";
            failures.fetch_add(1);
        }
    });
    if (!rows.empty() && failures.load() == rows.size()) {
        throw Error("trace_table: every boundary point failed");
    }
    return rows;
}

namespace {

void append_double(std::string& out, double v) {
    char buf[48];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

void append_vec(std::string& out, const Vec3& v) {
    append_double(out, v.x);
    out.push_back(',');
    append_double(out, v.y);
    out.push_back(',');
    append_double(out, v.z);
}

}  // namespace

std::string trace_table_csv(const std::vector<TraceRow>& rows) {
    std::string out =
        "point_x,point_y,point_z,nu_x,nu_y,nu_z,trace_i_x,trace_i_y,trace_i_z,"
        "trace_e_x,trace_e_y,trace_e_z,q0_x,q0_y,q0_z,jump_x,jump_y,jump_z,"
        "defect_i,defect_e,stderr,flag\n";
    for (const TraceRow& r : rows) {
        append_vec(out, r.point);
        out.push_back(',');
        append_vec(out, r.nu);
        out.push_back(',');
        append_vec(out, r.trace_i);
        out.push_back(',');
        append_vec(out, r.trace_e);
        out.push_back(',');
        append_vec(out, r.q0);
        out.push_back(',');
        append_vec(out, r.jump);
        out.push_back(',');
        append_double(out, r.defect_i);
        out.push_back(',');
        append_double(out, r.defect_e);
        out.push_back(',');
        append_double(out, r.std_error);
        out.push_back(',');
        out += r.flag;
        out.push_back('\n');
    }
    return out;
}

}  // namespace curltrace
