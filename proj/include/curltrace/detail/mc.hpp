#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>

#include "curltrace/fields.hpp"
#include "curltrace/rng.hpp"
#include "curltrace/vec3.hpp"

namespace curltrace::detail {

/// Streaming mean/variance accumulator for vector samples. The reported
/// standard error treats samples as i.i.d.; with jittered-stratified draws
/// that is a conservative overestimate.
struct VecAccumulator {
    Vec3 sum{0, 0, 0};
    Vec3 sumsq{0, 0, 0};
    std::size_t n = 0;

    void add(const Vec3& v) {
        sum += v;
        sumsq += Vec3{v.x * v.x, v.y * v.y, v.z * v.z};
        ++n;
    }

    Vec3 mean() const { return n ? sum / static_cast<double>(n) : Vec3{}; }

    /// Norm of the per-component standard errors of the mean.
    double std_error_of_mean() const {
        if (n < 2) return 0.0;
        const double dn = static_cast<double>(n);
        const Vec3 m = mean();
        const Vec3 var{(sumsq.x - dn * m.x * m.x) / (dn - 1.0),
                       (sumsq.y - dn * m.y * m.y) / (dn - 1.0),
                       (sumsq.z - dn * m.z * m.z) / (dn - 1.0)};
        return std::sqrt((std::max(var.x, 0.0) + std::max(var.y, 0.0) + std::max(var.z, 0.0)) /
                         dn);
    }
};

/// Jittered-stratified sample on the unit half-ball about +e3, in local
/// coordinates: v is the radial volume fraction (rho = v^(1/3)), mu = cos
/// of the polar angle, phi the azimuth.
struct HalfBallStrata {
    int nr, nmu, nphi;

    explicit HalfBallStrata(std::size_t n) {
        int m = static_cast<int>(std::floor(std::cbrt(static_cast<double>(n) / 2.0)));
        m = std::max(m, 1);
        nr = m;
        nmu = m;
        nphi = 2 * m;
    }
    std::size_t total() const {
        return static_cast<std::size_t>(nr) * static_cast<std::size_t>(nmu) *
               static_cast<std::size_t>(nphi);
    }
};

struct BallStrata {
    int nr, nmu, nphi;

    explicit BallStrata(std::size_t n) {
        int m = static_cast<int>(std::floor(std::cbrt(static_cast<double>(n) / 4.0)));
        m = std::max(m, 1);
        nr = m;
        nmu = 2 * m;
        nphi = 2 * m;
    }
    std::size_t total() const {
        return static_cast<std::size_t>(nr) * static_cast<std::size_t>(nmu) *
               static_cast<std::size_t>(nphi);
    }
};

/// Unit direction and radial fraction of one jittered cell draw.
struct LocalSample {
    Vec3 dir;     // unit vector
    double frac;  // rho / r in (0, 1]
};

inline LocalSample half_ball_cell(const HalfBallStrata& s, int ir, int imu, int iphi, double u1,
                                  double u2, double u3, const Vec3& e1, const Vec3& e2,
                                  const Vec3& nu) {
    const double v = (static_cast<double>(ir) + u1) / static_cast<double>(s.nr);
    const double mu = (static_cast<double>(imu) + u2) / static_cast<double>(s.nmu);
    const double phi =
        2.0 * std::numbers::pi * (static_cast<double>(iphi) + u3) / static_cast<double>(s.nphi);
    const double sin_t = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    const Vec3 dir = e1 * (sin_t * std::cos(phi)) + e2 * (sin_t * std::sin(phi)) + nu * mu;
    return {dir, std::cbrt(v)};
}

inline LocalSample ball_cell(const BallStrata& s, int ir, int imu, int iphi, double u1, double u2,
                             double u3) {
    const double v = (static_cast<double>(ir) + u1) / static_cast<double>(s.nr);
    const double mu = -1.0 + 2.0 * (static_cast<double>(imu) + u2) / static_cast<double>(s.nmu);
    const double phi =
        2.0 * std::numbers::pi * (static_cast<double>(iphi) + u3) / static_cast<double>(s.nphi);
    const double sin_t = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    const Vec3 dir{sin_t * std::cos(phi), sin_t * std::sin(phi), mu};
    return {dir, std::cbrt(v)};
}

/// Uniform MC over the half-ball B(x, nu, r): estimates the integral of
/// `integrand(y, dir)` where dir = (y - x)/|y - x| by construction. Points on
/// a field's singular set are re-drawn within their cell (at most a few
/// retries; the singular sets are codimension one).
template <typename F>
McVec3 integrate_half_ball(const Vec3& x, const Vec3& nu, double r, std::size_t n,
                           std::uint64_t seed, const VectorField* redraw_field, F&& integrand) {
    Vec3 e1, e2;
    orthonormal_frame(nu, e1, e2);
    const HalfBallStrata strata(n);
    VecAccumulator acc;
    std::uint64_t cell_index = 0;
    for (int ir = 0; ir < strata.nr; ++ir) {
        for (int imu = 0; imu < strata.nmu; ++imu) {
            for (int iphi = 0; iphi < strata.nphi; ++iphi, ++cell_index) {
                // Per-cell stream: re-draws stay local to the cell, so the
                // same seed yields common random numbers across radii.
                Rng rng(derive_seed(seed, cell_index));
                Vec3 y, dir;
                for (int attempt = 0; attempt < 64; ++attempt) {
                    const double u1 = rng.next_double();
                    const double u2 = rng.next_double();
                    const double u3 = rng.next_double();
                    const LocalSample ls =
                        half_ball_cell(strata, ir, imu, iphi, u1, u2, u3, e1, e2, nu);
                    dir = ls.dir;
                    y = x + dir * (ls.frac * r);
                    if (!redraw_field || redraw_field->defined_at(y)) break;
                }
                acc.add(integrand(y, dir));
            }
        }
    }
    const double volume = 2.0 * std::numbers::pi * r * r * r / 3.0;
    return {acc.mean() * volume, acc.std_error_of_mean() * volume};
}

/// Uniform MC over the full ball B(x, r), same re-draw policy.
template <typename F>
McVec3 integrate_ball(const Vec3& x, double r, std::size_t n, std::uint64_t seed,
                      const VectorField* redraw_field, F&& integrand) {
    const BallStrata strata(n);
    VecAccumulator acc;
    std::uint64_t cell_index = 0;
    for (int ir = 0; ir < strata.nr; ++ir) {
        for (int imu = 0; imu < strata.nmu; ++imu) {
            for (int iphi = 0; iphi < strata.nphi; ++iphi, ++cell_index) {
                Rng rng(derive_seed(seed, cell_index));
                Vec3 y;
                for (int attempt = 0; attempt < 64; ++attempt) {
                    const double u1 = rng.next_double();
                    const double u2 = rng.next_double();
                    const double u3 = rng.next_double();
                    const LocalSample ls = ball_cell(strata, ir, imu, iphi, u1, u2, u3);
                    y = x + ls.dir * (ls.frac * r);
                    if (!redraw_field || redraw_field->defined_at(y)) break;
                }
                acc.add(integrand(y));
            }
        }
    }
    const double volume = 4.0 * std::numbers::pi * r * r * r / 3.0;
    return {acc.mean() * volume, acc.std_error_of_mean() * volume};
}

/// Jittered-stratified MC over the cube circumscribing B(center, radius);
/// integrands are expected to vanish outside the inscribed ball (test
/// functions do, by their compact support).
template <typename F>
McVec3 integrate_support_cube(const Vec3& center, double radius, std::size_t n,
                              std::uint64_t seed, const VectorField* redraw_field, F&& integrand) {
    int g = static_cast<int>(std::floor(std::cbrt(static_cast<double>(n))));
    g = std::max(g, 1);
    const Vec3 lo = center - Vec3{radius, radius, radius};
    const double cell = 2.0 * radius / static_cast<double>(g);
    VecAccumulator acc;
    std::uint64_t cell_index = 0;
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
            for (int k = 0; k < g; ++k, ++cell_index) {
                Rng rng(derive_seed(seed, cell_index));
                Vec3 y;
                for (int attempt = 0; attempt < 64; ++attempt) {
                    y = lo + Vec3{(static_cast<double>(i) + rng.next_double()) * cell,
                                  (static_cast<double>(j) + rng.next_double()) * cell,
                                  (static_cast<double>(k) + rng.next_double()) * cell};
                    if (!redraw_field || redraw_field->defined_at(y)) break;
                }
                acc.add(integrand(y));
            }
        }
    }
    const double volume = std::pow(2.0 * radius, 3);
    return {acc.mean() * volume, acc.std_error_of_mean() * volume};
}

}  // namespace curltrace::detail
