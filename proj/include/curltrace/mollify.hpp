#pragma once

#include <cstdint>
#include <vector>

#include "curltrace/fields.hpp"
#include "curltrace/geometry.hpp"
#include "curltrace/measure.hpp"
#include "curltrace/vec3.hpp"

namespace curltrace {

/// The standard symmetric mollifying kernel: radial bump
/// c * exp(-1/(1 - |x|^2)) supported in the unit ball, normalized to unit
/// mass. One kernel is fixed globally so limit sets are consistent.
class Mollifier {
  public:
    /// Normalized kernel; the constant is computed once by adaptive Simpson
    /// quadrature (tolerance 1e-12) and cached.
    Mollifier();

    /// Kernel with an explicit normalization constant (for tests).
    static Mollifier with_constant(double c);

    /// Radial profile at t = |x|, zero for t >= 1.
    double profile(double t) const;

    double density(const Vec3& y) const { return profile(norm(y)); }

    /// Scaled kernel rho_eps(y) = eps^-3 rho(y/eps).
    double density_scaled(const Vec3& y, double eps) const {
        return profile(norm(y) / eps) / (eps * eps * eps);
    }

    double normalization_constant() const { return c_; }

  private:
    double c_ = 0.0;
};

/// Monte Carlo estimate of the mollified field (F * rho_eps)(x) by uniform
/// sampling of B(x, eps) weighted by the kernel. Deterministic given seed.
McVec3 mollify_field(const VectorField& field, double eps, const Vec3& x, std::size_t n_samples,
                     std::uint64_t seed, const Box& box, const Mollifier& kernel = Mollifier());

/// One-sided mollification: the integral of phi(y) rho_eps(x - y) over E
/// only. Converges to phi(x), phi(x)/2, 0 as eps -> 0 for x interior, on the
/// reduced boundary, exterior. Exactly zero when B(x, eps) misses E.
double one_sided_mollify(const TestFunction& phi, const FinitePerimeterSet& set, double eps,
                         const Vec3& x, std::size_t n_samples, std::uint64_t seed, const Box& box,
                         const Mollifier& kernel = Mollifier());

/// Deterministic radial quadrature of the kernel mass; 1 within 1e-6 for the
/// normalized kernel. The seed is accepted for interface uniformity but the
/// composite rule is deterministic regardless.
double mollifier_mass_check(std::size_t n_samples, std::uint64_t seed, double eps = 1.0,
                            const Mollifier& kernel = Mollifier());

/// Geometric epsilon schedule eps0 * 2^-k for limit extrapolation.
struct MollifyConfig {
    double eps0 = 0.2;
    int levels = 7;
    std::size_t samples = 50000;
    std::uint64_t seed = 42;

    std::vector<double> schedule() const;
};

}  // namespace curltrace
