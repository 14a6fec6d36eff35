#include "curltrace/fields.hpp"

#include <cmath>

#include "curltrace/errors.hpp"

namespace curltrace {

VectorField VectorField::smooth(EvalFn eval, double sup_bound) {
    VectorField f;
    f.eval_ = std::move(eval);
    f.sup_bound_ = sup_bound;
    return f;
}

VectorField VectorField::constant(const Vec3& value) {
    return smooth([value](const Vec3&) { return value; }, norm(value))
        .with_curl_density([](const Vec3&) { return Vec3{0, 0, 0}; });
}

VectorField VectorField::piecewise(std::shared_ptr<const FinitePerimeterSet> interface,
                                   VectorField inside, VectorField outside) {
    VectorField f;
    f.interface_ = std::move(interface);
    f.sup_bound_ = std::max(inside.sup_bound(), outside.sup_bound());
    f.inside_ = std::make_shared<VectorField>(std::move(inside));
    f.outside_ = std::make_shared<VectorField>(std::move(outside));
    return f;
}

VectorField VectorField::with_curl_density(CurlFn curl) const {
    VectorField f = *this;
    f.curl_ = std::move(curl);
    return f;
}

VectorField VectorField::with_singular_distance(DistFn dist) const {
    VectorField f = *this;
    f.singular_ = std::move(dist);
    return f;
}

VectorField VectorField::with_support(const Vec3& center, double radius) const {
    VectorField f = *this;
    f.support_center_ = center;
    f.support_radius_ = radius;
    return f;
}

Vec3 VectorField::eval(const Vec3& x) const {
    if (!defined_at(x)) {
        throw UndefinedPointError("eval: point lies on the field's singular set");
    }
    if (interface_) {
        return interface_->contains(x) ? inside_->eval(x) : outside_->eval(x);
    }
    return eval_(x);
}

double VectorField::singular_distance(const Vec3& x) const {
    if (singular_) return singular_(x);
    if (interface_) {
        return std::min(inside_->singular_distance(x), outside_->singular_distance(x));
    }
    return std::numeric_limits<double>::infinity();
}

Vec3 VectorField::curl_density(const Vec3& x) const {
    if (interface_) {
        return interface_->contains(x) ? inside_->curl_density(x) : outside_->curl_density(x);
    }
    if (!curl_) throw Error("curl_density: field has no closed-form curl");
    return curl_(x);
}

Vec3 VectorField::eval_inside(const Vec3& x) const {
    return interface_ ? inside_->eval(x) : eval(x);
}

Vec3 VectorField::eval_outside(const Vec3& x) const {
    return interface_ ? outside_->eval(x) : eval(x);
}

GradientField GradientField::linear(const Vec3& coeffs) {
    GradientField g;
    g.eval = [coeffs](const Vec3& x) { return dot(coeffs, x); };
    g.gradient = [coeffs](const Vec3&) { return coeffs; };
    g.gradient_bound = norm(coeffs);
    return g;
}

GradientField GradientField::zero() { return linear({0, 0, 0}); }

}  // namespace curltrace
