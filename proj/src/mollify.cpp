#include "curltrace/mollify.hpp"

#include <cmath>
#include <numbers>

#include "curltrace/detail/mc.hpp"
#include "curltrace/errors.hpp"
#include "curltrace/rng.hpp"

namespace curltrace {

namespace {

double unnormalized_profile(double t) {
    if (t >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - t * t));
}

double simpson(double (*f)(double), double a, double b) {
    return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

double adaptive_simpson(double (*f)(double), double a, double b, double whole, double tol,
                        int depth) {
    const double m = 0.5 * (a + b);
    const double left = simpson(f, a, m);
    const double right = simpson(f, m, b);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson(f, a, m, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, right, 0.5 * tol, depth - 1);
}

double radial_mass_integrand(double t) {
    return 4.0 * std::numbers::pi * t * t * unnormalized_profile(t);
}

// 1 / integral of the unnormalized kernel over R^3, computed once.
double normalization() {
    static const double value = [] {
        const double whole = simpson(radial_mass_integrand, 0.0, 1.0);
        const double mass =
            adaptive_simpson(radial_mass_integrand, 0.0, 1.0, whole, 1e-12, 48);
        return 1.0 / mass;
    }();
    return value;
}

}  // namespace

Mollifier::Mollifier() : c_(normalization()) {}

Mollifier Mollifier::with_constant(double c) {
    Mollifier m;
    m.c_ = c;
    return m;
}

double Mollifier::profile(double t) const { return c_ * unnormalized_profile(t); }

McVec3 mollify_field(const VectorField& field, double eps, const Vec3& x, std::size_t n_samples,
                     std::uint64_t seed, const Box& box, const Mollifier& kernel) {
    if (!(eps > 0.0)) throw Error("mollify_field: eps must be positive");
    if (!box.contains_ball(x, eps)) {
        throw OutsideDomainError("mollify_field: B(x, eps) exits the working box");
    }
    return detail::integrate_ball(x, eps, n_samples, seed, &field, [&](const Vec3& y) {
        return field.eval(y) * kernel.density_scaled(x - y, eps);
    });
}

double one_sided_mollify(const TestFunction& phi, const FinitePerimeterSet& set, double eps,
                         const Vec3& x, std::size_t n_samples, std::uint64_t seed, const Box& box,
                         const Mollifier& kernel) {
    if (!(eps > 0.0)) throw Error("one_sided_mollify: eps must be positive");
    if (!box.contains_ball(x, eps)) {
        throw OutsideDomainError("one_sided_mollify: B(x, eps) exits the working box");
    }
    const McVec3 est = detail::integrate_ball(x, eps, n_samples, seed, nullptr,
                                              [&](const Vec3& y) -> Vec3 {
                                                  if (!set.contains(y)) return {0, 0, 0};
                                                  const double v =
                                                      phi(y) * kernel.density_scaled(x - y, eps);
                                                  return {v, 0, 0};
                                              });
    return est.value.x;
}

double mollifier_mass_check(std::size_t n_samples, std::uint64_t seed, double eps,
                            const Mollifier& kernel) {
    (void)seed;
    const std::size_t panels = std::max<std::size_t>(n_samples, 64);
    // Composite Simpson on [0, eps] of 4 pi t^2 rho_eps(t).
    double sum = 0.0;
    const double h = eps / static_cast<double>(panels);
    auto f = [&](double t) {
        return 4.0 * std::numbers::pi * t * t * kernel.profile(t / eps) / (eps * eps * eps);
    };
    for (std::size_t i = 0; i < panels; ++i) {
        const double a = static_cast<double>(i) * h;
        const double b = a + h;
        sum += (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
    }
    return sum;
}

std::vector<double> MollifyConfig::schedule() const {
    std::vector<double> eps;
    eps.reserve(static_cast<std::size_t>(levels));
    double e = eps0;
    for (int k = 0; k < levels; ++k, e *= 0.5) eps.push_back(e);
    return eps;
}

}  // namespace curltrace
