#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>

#include "curltrace/geometry.hpp"
#include "curltrace/vec3.hpp"

namespace curltrace {

/// Monte Carlo estimate of a vector quantity with its standard error.
struct McVec3 {
    Vec3 value;
    double std_error = 0.0;
};

/// Essentially bounded vector field on R^3, either smooth (given by a
/// closure, defined off an optional singular set) or piecewise across a
/// finite-perimeter interface. Evaluation is pure; fields are immutable and
/// safe to evaluate concurrently.
class VectorField {
  public:
    using EvalFn = std::function<Vec3(const Vec3&)>;

    using CurlFn = std::function<Vec3(const Vec3&)>;
    using DistFn = std::function<double(const Vec3&)>;

    /// Default-constructed fields are identically zero.
    VectorField() : eval_([](const Vec3&) { return Vec3{0, 0, 0}; }) {}

    static VectorField smooth(EvalFn eval, double sup_bound);
    static VectorField constant(const Vec3& value);

    /// Piecewise field: inside branch on E (boundary points use the inside
    /// branch by convention), outside branch on the complement.
    static VectorField piecewise(std::shared_ptr<const FinitePerimeterSet> interface,
                                 VectorField inside, VectorField outside);

    /// Attach a closed-form curl density (smooth fields only).
    VectorField with_curl_density(CurlFn curl) const;

    /// Attach the distance to the singular set where the field is undefined;
    /// eval throws UndefinedPointError within 1e-14 of it and quadrature
    /// samplers re-draw such points.
    VectorField with_singular_distance(DistFn dist) const;

    /// Declare that the field vanishes outside B(center, radius).
    VectorField with_support(const Vec3& center, double radius) const;

    Vec3 eval(const Vec3& x) const;
    Vec3 operator()(const Vec3& x) const { return eval(x); }

    /// Distance to the singular set (+inf when the field is total).
    double singular_distance(const Vec3& x) const;
    bool defined_at(const Vec3& x) const { return singular_distance(x) > 1e-14; }

    double sup_bound() const { return sup_bound_; }

    bool has_curl_density() const {
        if (interface_) return inside_->has_curl_density() && outside_->has_curl_density();
        return static_cast<bool>(curl_);
    }
    Vec3 curl_density(const Vec3& x) const;

    bool is_piecewise() const { return static_cast<bool>(interface_); }
    const FinitePerimeterSet& interface() const { return *interface_; }
    std::shared_ptr<const FinitePerimeterSet> interface_ptr() const { return interface_; }
    /// One-sided values at interface points (piecewise fields; smooth fields
    /// return eval for both sides).
    Vec3 eval_inside(const Vec3& x) const;
    Vec3 eval_outside(const Vec3& x) const;

    bool has_support_ball() const { return support_radius_ < std::numeric_limits<double>::infinity(); }
    const Vec3& support_center() const { return support_center_; }
    double support_radius() const { return support_radius_; }

  private:
    EvalFn eval_;
    CurlFn curl_;
    DistFn singular_;
    std::shared_ptr<const FinitePerimeterSet> interface_;
    std::shared_ptr<const VectorField> inside_, outside_;
    double sup_bound_ = 0.0;
    Vec3 support_center_{0, 0, 0};
    double support_radius_ = std::numeric_limits<double>::infinity();
};

/// Scalar potential with closed-form gradient, used to perturb scenarios by
/// a curl-free component.
struct GradientField {
    std::function<double(const Vec3&)> eval;
    std::function<Vec3(const Vec3&)> gradient;
    double gradient_bound = 0.0;

    static GradientField linear(const Vec3& coeffs);
    static GradientField zero();
};

}  // namespace curltrace
