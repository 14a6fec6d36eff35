#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curltrace/fields.hpp"
#include "curltrace/geometry.hpp"
#include "curltrace/measure.hpp"
#include "curltrace/mollify.hpp"
#include "curltrace/scenarios.hpp"

namespace curltrace {

/// Radius schedule and sample budget for half-ball trace estimation.
struct TraceConfig {
    double r0 = 0.1;
    int levels = 6;
    std::size_t samples_per_radius = 200000;
    std::uint64_t seed = 42;

    /// r0 * 2^-k, k = 0 .. levels-1 (strictly decreasing).
    std::vector<double> schedule() const;
};

/// Half-ball averages at a boundary point over a decreasing radius schedule,
/// with the extrapolated r -> 0 limit.
struct TraceEstimate {
    Vec3 point;
    Vec3 inner_normal;
    std::vector<double> radii;
    std::vector<Vec3> values;        // normalized per-radius averages
    std::vector<double> mc_errors;   // per-radius MC standard errors
    Vec3 extrapolated;
    double std_error = 0.0;
    double tangential_defect = 0.0;  // |extrapolated . inner_normal|
    bool limit_unstable = false;
};

/// Componentwise linear-model fit value(r) = q + c r; returns the intercept
/// with a residual-based error estimate. Falls back to the last value (with
/// the data spread as error) when the fit residual exceeds the spread.
struct RichardsonFit {
    Vec3 value;
    double error = 0.0;
    double fit_residual = 0.0;
    double spread = 0.0;
    bool fallback = false;
};

RichardsonFit richardson_extrapolate(const std::vector<double>& radii,
                                     const std::vector<Vec3>& values);

/// MC estimate of the half-ball integral of F(y) x (y-x)/|y-x| over
/// B(x, nu, r) by uniform jittered-stratified sampling; the direction factor
/// is computed from the sample parametrization so the integrand is bounded
/// by the sup norm of F everywhere.
McVec3 half_ball_integral(const VectorField& field, const Vec3& x, const Vec3& nu, double r,
                          std::size_t n, std::uint64_t seed, const Box& box);

/// Pointwise interior tangential trace at a reduced-boundary point: the
/// extrapolated limit of 3/(pi r^3) times the half-ball integral along the
/// inner normal. Common random numbers are reused across radii.
TraceEstimate interior_trace_at(const VectorField& field, const FinitePerimeterSet& set,
                                const Vec3& x, const std::vector<double>& radii,
                                std::size_t samples_per_radius, std::uint64_t seed,
                                const Box& box);

/// Exterior variant: the half-ball on the other side of the tangent plane,
/// with a minus sign, so that for piecewise-continuous fields the result is
/// the outside limit of F x nu.
TraceEstimate exterior_trace_at(const VectorField& field, const FinitePerimeterSet& set,
                                const Vec3& x, const std::vector<double>& radii,
                                std::size_t samples_per_radius, std::uint64_t seed,
                                const Box& box);

/// Mean of the interior and exterior traces (the mean tangential trace).
Vec3 mean_trace_q0(const TraceEstimate& interior, const TraceEstimate& exterior);

/// Exterior minus interior trace: the surface density of the curl measure.
Vec3 jump_from_traces(const TraceEstimate& interior, const TraceEstimate& exterior);

/// Limit over the epsilon schedule of the mollified boundary restriction
/// F_eps(x) x nu; for piecewise-continuous fields this is the mean trace.
Vec3 mollified_boundary_trace(const VectorField& field, const FinitePerimeterSet& set,
                              const Vec3& x, const MollifyConfig& cfg, const Box& box);

/// One row of the per-point trace table (CSV schema fixed by the CLI).
struct TraceRow {
    Vec3 point;
    Vec3 nu;
    Vec3 trace_i;
    Vec3 trace_e;
    Vec3 q0;
    Vec3 jump;
    double defect_i = 0.0;
    double defect_e = 0.0;
    double std_error = 0.0;
    std::string flag = "ok";
};

/// Trace sweep over deterministic boundary samples of the scenario set;
/// per-point work is parallel with seeds derived from (seed, point index),
/// so the result is identical regardless of execution order.
std::vector<TraceRow> trace_table(const GoldenScenario& scenario, std::size_t n_points,
                                  const TraceConfig& cfg);

/// Render rows with shortest round-trip float formatting (byte-stable).
std::string trace_table_csv(const std::vector<TraceRow>& rows);

/// Default r0 for a shape: a tenth of its feature size.
double default_r0(const FinitePerimeterSet& set);

/// Default eps0 for a shape: a fifth of its feature size.
double default_eps0(const FinitePerimeterSet& set);

}  // namespace curltrace
