#include "curltrace/measure.hpp"

#include <algorithm>
#include <cmath>

#include "curltrace/detail/mc.hpp"
#include "curltrace/errors.hpp"
#include "curltrace/rng.hpp"

namespace curltrace {

namespace {

// Max of |d/dt exp(1 - 1/(1-t^2))| over [0,1), scanned once.
double bump_profile_slope_max() {
    static const double value = [] {
        double best = 0.0;
        for (int i = 1; i < 20000; ++i) {
            const double t = static_cast<double>(i) / 20000.0;
            const double one_m = 1.0 - t * t;
            const double d = std::exp(1.0 - 1.0 / one_m) * 2.0 * t / (one_m * one_m);
            best = std::max(best, d);
        }
        return best * 1.001;
    }();
    return value;
}

void require_support_inside(const TestFunction& phi, const Box& box) {
    if (!box.contains_ball(phi.support_center(), phi.support_radius())) {
        throw SupportEscapesError("test-function support exits the working box");
    }
}

}  // namespace

TestFunction TestFunction::custom(EvalFn eval, GradFn grad, const Vec3& support_center,
                                  double support_radius, double lipschitz_bound) {
    TestFunction f;
    f.eval_ = std::move(eval);
    f.grad_ = std::move(grad);
    f.support_center_ = support_center;
    f.support_radius_ = support_radius;
    f.lipschitz_bound_ = lipschitz_bound;
    return f;
}

TestFunction TestFunction::bump(const Vec3& center, double radius) {
    auto eval = [center, radius](const Vec3& x) {
        const double t = norm(x - center) / radius;
        if (t >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - t * t));
    };
    auto grad = [center, radius](const Vec3& x) -> Vec3 {
        const Vec3 d = x - center;
        const double dist = norm(d);
        const double t = dist / radius;
        if (t >= 1.0 || dist == 0.0) return {0, 0, 0};
        const double one_m = 1.0 - t * t;
        const double dphi_dt = -std::exp(1.0 - 1.0 / one_m) * 2.0 * t / (one_m * one_m);
        return d * (dphi_dt / (radius * dist));
    };
    return custom(std::move(eval), std::move(grad), center, radius,
                  bump_profile_slope_max() / radius);
}

TestFunction TestFunction::plateau(const Vec3& center, double inner_radius, double outer_radius) {
    const double ramp = outer_radius - inner_radius;
    auto eval = [center, inner_radius, outer_radius, ramp](const Vec3& x) {
        const double d = norm(x - center);
        if (d <= inner_radius) return 1.0;
        if (d >= outer_radius) return 0.0;
        return (outer_radius - d) / ramp;
    };
    auto grad = [center, inner_radius, outer_radius, ramp](const Vec3& x) -> Vec3 {
        const Vec3 v = x - center;
        const double d = norm(v);
        if (d <= inner_radius || d >= outer_radius || d == 0.0) return {0, 0, 0};
        return v * (-1.0 / (ramp * d));
    };
    return custom(std::move(eval), std::move(grad), center, outer_radius, 1.0 / ramp);
}

TestFunction TestFunction::cone(const Vec3& center, double radius) {
    auto eval = [center, radius](const Vec3& x) {
        return std::max(radius - norm(x - center), 0.0);
    };
    auto grad = [center, radius](const Vec3& x) -> Vec3 {
        const Vec3 v = x - center;
        const double d = norm(v);
        if (d >= radius || d == 0.0) return {0, 0, 0};
        return v * (-1.0 / d);
    };
    return custom(std::move(eval), std::move(grad), center, radius, 1.0);
}

McVec3 curl_pairing(const VectorField& field, const TestFunction& phi, const Box& box,
                    const QuadConfig& quad) {
    require_support_inside(phi, box);
    return detail::integrate_support_cube(
        phi.support_center(), phi.support_radius(), quad.volume_samples,
        derive_seed(quad.seed, tag("curl-pairing")), &field,
        [&](const Vec3& y) { return cross(field.eval(y), phi.gradient(y)); });
}

namespace {

bool volume_point_selected(const std::optional<Restriction>& restrict_to, const Vec3& y) {
    if (!restrict_to) return true;
    const PointClass c = restrict_to->set->classify(y);
    if (restrict_to->side == SideSelector::Complement) return c == PointClass::Exterior;
    return c == PointClass::Interior;
}

// Surface quadrature of phi times the part density, optionally filtered to a
// region when the part lives on a different surface than the restriction.
Vec3 surface_part_pairing(const SurfacePart& part, const TestFunction& phi,
                          const std::optional<Restriction>& restrict_to, std::size_t n,
                          std::uint64_t seed) {
    const bool same_surface = restrict_to && restrict_to->set->same_shape(*part.surface);
    if (restrict_to && same_surface) {
        if (restrict_to->side != SideSelector::ExteriorSide) return {0, 0, 0};
    }
    Vec3 sum{0, 0, 0};
    for (const SurfaceSample& s : part.surface->sample_boundary(n, seed)) {
        if (restrict_to && !same_surface && !volume_point_selected(restrict_to, s.point)) {
            continue;
        }
        sum += part.density(s.point) * (phi(s.point) * s.weight);
    }
    return sum;
}

}  // namespace

McVec3 measure_pairing(const CurlMeasure& mu, const TestFunction& phi,
                       const std::optional<Restriction>& restrict_to, const Box& box,
                       const QuadConfig& quad) {
    require_support_inside(phi, box);
    McVec3 result;
    if (mu.has_volume_density()) {
        result = detail::integrate_support_cube(
            phi.support_center(), phi.support_radius(), quad.volume_samples,
            derive_seed(quad.seed, tag("measure-pairing")), nullptr, [&](const Vec3& y) -> Vec3 {
                if (!volume_point_selected(restrict_to, y)) return {0, 0, 0};
                return mu.volume_density(y) * phi(y);
            });
    }
    std::uint64_t part_index = 0;
    for (const SurfacePart& part : mu.surface_parts()) {
        result.value += surface_part_pairing(
            part, phi, restrict_to, quad.surface_samples,
            derive_seed(quad.seed, tag("measure-surface") + part_index++));
    }
    return result;
}

McVec3 trace_pairing(const VectorField& field, const CurlMeasure& mu,
                     const FinitePerimeterSet& set, SideSelector side, const TestFunction& phi,
                     const Box& box, const QuadConfig& quad) {
    const McVec3 measure_term =
        measure_pairing(mu, phi, Restriction{&set, side}, box, quad);
    const bool over_complement = (side == SideSelector::Complement);
    const McVec3 volume_term = detail::integrate_support_cube(
        phi.support_center(), phi.support_radius(), quad.volume_samples,
        derive_seed(quad.seed, tag("trace-pairing")), &field, [&](const Vec3& y) -> Vec3 {
            const bool in_set = set.classify(y) == PointClass::Interior;
            if (in_set == over_complement) return {0, 0, 0};
            return cross(field.eval(y), phi.gradient(y));
        });
    return {measure_term.value - volume_term.value,
            std::hypot(measure_term.std_error, volume_term.std_error)};
}

PiecewiseScalar PiecewiseScalar::smooth(EvalFn eval, GradFn grad) {
    PiecewiseScalar g;
    g.inside_ = std::move(eval);
    g.inside_grad_ = std::move(grad);
    return g;
}

PiecewiseScalar PiecewiseScalar::indicator(std::shared_ptr<const FinitePerimeterSet> set) {
    return piecewise(
        std::move(set), [](const Vec3&) { return 1.0; },
        [](const Vec3&) -> Vec3 { return {0, 0, 0}; }, [](const Vec3&) { return 0.0; },
        [](const Vec3&) -> Vec3 { return {0, 0, 0}; });
}

PiecewiseScalar PiecewiseScalar::piecewise(std::shared_ptr<const FinitePerimeterSet> interface,
                                           EvalFn inside, GradFn inside_grad, EvalFn outside,
                                           GradFn outside_grad) {
    PiecewiseScalar g;
    g.interface_ = std::move(interface);
    g.inside_ = std::move(inside);
    g.inside_grad_ = std::move(inside_grad);
    g.outside_ = std::move(outside);
    g.outside_grad_ = std::move(outside_grad);
    return g;
}

double PiecewiseScalar::eval(const Vec3& x) const {
    if (!interface_) return inside_(x);
    return interface_->contains(x) ? inside_(x) : outside_(x);
}

Vec3 PiecewiseScalar::gradient(const Vec3& x) const {
    if (!interface_) return inside_grad_(x);
    return interface_->contains(x) ? inside_grad_(x) : outside_grad_(x);
}

double PiecewiseScalar::precise(const Vec3& x) const {
    if (!interface_) return inside_(x);
    switch (interface_->classify(x)) {
        case PointClass::Interior: return inside_(x);
        case PointClass::Exterior: return outside_(x);
        default: return 0.5 * (inside_(x) + outside_(x));
    }
}

double PiecewiseScalar::jump(const Vec3& x) const {
    if (!interface_) return 0.0;
    return inside_(x) - outside_(x);
}

Vec3 product_rule_residual(const VectorField& field, const PiecewiseScalar& g,
                           const TestFunction& phi, const Box& box, const QuadConfig& quad) {
    require_support_inside(phi, box);
    if (g.is_piecewise() && field.is_piecewise() &&
        !g.interface().same_shape(field.interface())) {
        throw Error("product_rule_residual: g and field must share the interface");
    }

    // Curl(gF)(phi) and the volume half of the product-rule measure in one
    // sweep over the support: integrands g F x grad(phi) and phi F x grad(g).
    const McVec3 combined = detail::integrate_support_cube(
        phi.support_center(), phi.support_radius(), quad.volume_samples,
        derive_seed(quad.seed, tag("product-rule")), &field, [&](const Vec3& y) -> Vec3 {
            const Vec3 f = field.eval(y);
            const Vec3 lhs = cross(f, phi.gradient(y)) * g.eval(y);
            const Vec3 rhs = cross(f, g.gradient(y)) * phi(y);
            return lhs + rhs;  // residual accumulates lhs - (-rhs)
        });

    // Measure half: phi g* against the curl of the field (closed-form volume
    // density where available, plus the interface jump of F when the field
    // is piecewise) and the surface part of the g-jump term.
    Vec3 measure_term{0, 0, 0};
    if (field.has_curl_density()) {
        measure_term += detail::integrate_support_cube(
                            phi.support_center(), phi.support_radius(), quad.volume_samples,
                            derive_seed(quad.seed, tag("product-rule-mu")), &field,
                            [&](const Vec3& y) -> Vec3 {
                                return field.curl_density(y) * (phi(y) * g.precise(y));
                            })
                            .value;
    }

    const FinitePerimeterSet* interface = nullptr;
    if (field.is_piecewise()) interface = &field.interface();
    if (g.is_piecewise()) interface = &g.interface();
    if (interface != nullptr) {
        const auto samples = interface->sample_boundary(
            quad.surface_samples, derive_seed(quad.seed, tag("product-rule-surface")));
        for (const SurfaceSample& s : samples) {
            const Vec3 f_in = field.eval_inside(s.point);
            const Vec3 f_out = field.eval_outside(s.point);
            if (field.is_piecewise()) {
                // Surface density of Curl F across the interface, weighted
                // by the precise representative of g.
                const Vec3 q2 = cross(f_out - f_in, s.inner_normal);
                measure_term += q2 * (phi(s.point) * g.precise(s.point) * s.weight);
            }
            if (g.is_piecewise()) {
                // The jump of g pairs with the mean one-sided trace of F.
                const Vec3 q0 = cross(f_in + f_out, s.inner_normal) * 0.5;
                measure_term -= q0 * (g.jump(s.point) * phi(s.point) * s.weight);
            }
        }
    }

    return combined.value - measure_term;
}

Vec3 compact_support_total(const VectorField& field, const Box& box, const QuadConfig& quad) {
    if (!field.has_support_ball()) {
        throw SupportNotCompactError("compact_support_total: field declares no support ball");
    }
    const Vec3 c = field.support_center();
    const double r = field.support_radius();
    if (!box.contains_ball(c, 1.5 * r)) {
        throw SupportNotCompactError(
            "compact_support_total: support is not strictly inside the working box");
    }
    const TestFunction plateau = TestFunction::plateau(c, 1.2 * r, 1.5 * r);
    return curl_pairing(field, plateau, box, quad).value;
}

Vec3 jump_density(const CurlMeasure& mu, const FinitePerimeterSet& set, const Vec3& x) {
    (void)set.inner_normal(x);  // EdgePointError on cube edges
    for (const SurfacePart& part : mu.surface_parts()) {
        if (part.surface->same_shape(set)) return part.density(x);
    }
    return {0, 0, 0};
}

}  // namespace curltrace
