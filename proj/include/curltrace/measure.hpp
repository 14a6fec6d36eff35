#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "curltrace/fields.hpp"
#include "curltrace/geometry.hpp"
#include "curltrace/vec3.hpp"

namespace curltrace {

/// Which measure-theoretic region a pairing integrates over: the interior
/// E^1, the interior plus reduced boundary, or the exterior E^0.
enum class SideSelector { InteriorSide, ExteriorSide, Complement };

/// One surface component of a vector measure: a density with respect to the
/// surface measure on the reduced boundary of an analytic set.
struct SurfacePart {
    std::shared_ptr<const FinitePerimeterSet> surface;
    std::function<Vec3(const Vec3&)> density;
};

/// Vector-valued Radon measure split into a volume density (with respect to
/// Lebesgue measure, zero where unspecified) and surface parts. Absolute
/// continuity with respect to the surface measure is structural: there is no
/// way to represent atoms or lower-dimensional parts.
class CurlMeasure {
  public:
    static CurlMeasure zero() { return CurlMeasure{}; }

    CurlMeasure& set_volume_density(std::function<Vec3(const Vec3&)> density) {
        volume_density_ = std::move(density);
        return *this;
    }
    CurlMeasure& add_surface_part(std::shared_ptr<const FinitePerimeterSet> surface,
                                  std::function<Vec3(const Vec3&)> density) {
        surface_parts_.push_back({std::move(surface), std::move(density)});
        return *this;
    }

    bool has_volume_density() const { return static_cast<bool>(volume_density_); }
    Vec3 volume_density(const Vec3& x) const {
        return volume_density_ ? volume_density_(x) : Vec3{};
    }
    const std::vector<SurfacePart>& surface_parts() const { return surface_parts_; }

  private:
    std::function<Vec3(const Vec3&)> volume_density_;
    std::vector<SurfacePart> surface_parts_;
};

/// Compactly supported Lipschitz scalar test function with an a.e. gradient.
class TestFunction {
  public:
    using EvalFn = std::function<double(const Vec3&)>;
    using GradFn = std::function<Vec3(const Vec3&)>;

    static TestFunction custom(EvalFn eval, GradFn grad, const Vec3& support_center,
                               double support_radius, double lipschitz_bound);

    /// Smooth radial bump, value 1 at the center, supported in the ball.
    static TestFunction bump(const Vec3& center, double radius);

    /// Identically 1 inside `inner_radius`, linear ramp to 0 at `outer_radius`.
    static TestFunction plateau(const Vec3& center, double inner_radius, double outer_radius);

    /// The cone max{r - |y - x|, 0}.
    static TestFunction cone(const Vec3& center, double radius);

    double operator()(const Vec3& x) const { return eval_(x); }
    Vec3 gradient(const Vec3& x) const { return grad_(x); }

    const Vec3& support_center() const { return support_center_; }
    double support_radius() const { return support_radius_; }
    double lipschitz_bound() const { return lipschitz_bound_; }

  private:
    EvalFn eval_;
    GradFn grad_;
    Vec3 support_center_;
    double support_radius_ = 0.0;
    double lipschitz_bound_ = 0.0;
};

/// Sample budget for the quadratures behind the distributional pairings.
struct QuadConfig {
    std::size_t volume_samples = 200000;
    std::size_t surface_samples = 2000;
    std::uint64_t seed = 42;
};

/// Restriction of a pairing to one side of a finite-perimeter set.
struct Restriction {
    const FinitePerimeterSet* set = nullptr;
    SideSelector side = SideSelector::InteriorSide;
};

/// Distributional pairing of the curl of a field with a test function,
/// estimated as the volume integral of F x grad(phi); for smooth fields this
/// equals the integral of phi against the classical curl.
McVec3 curl_pairing(const VectorField& field, const TestFunction& phi, const Box& box,
                    const QuadConfig& quad);

/// Integral of phi against the measure over the selected region. Surface
/// parts on the restricting set are included for ExteriorSide with weight 1,
/// excluded for InteriorSide and Complement; the volume part is filtered by
/// point classification.
McVec3 measure_pairing(const CurlMeasure& mu, const TestFunction& phi,
                       const std::optional<Restriction>& restrict_to, const Box& box,
                       const QuadConfig& quad);

/// Tangential-trace pairing over one side of a set: the measure pairing over
/// the region minus the volume integral of F x grad(phi) over E (or over the
/// complement of E for the Complement side).
McVec3 trace_pairing(const VectorField& field, const CurlMeasure& mu,
                     const FinitePerimeterSet& set, SideSelector side, const TestFunction& phi,
                     const Box& box, const QuadConfig& quad);

/// Scalar multiplier for the product rule: smooth, or piecewise smooth
/// across an analytic interface. The precise representative takes the
/// half-sum of the one-sided values on the interface.
class PiecewiseScalar {
  public:
    using EvalFn = std::function<double(const Vec3&)>;
    using GradFn = std::function<Vec3(const Vec3&)>;

    static PiecewiseScalar smooth(EvalFn eval, GradFn grad);
    static PiecewiseScalar indicator(std::shared_ptr<const FinitePerimeterSet> set);
    static PiecewiseScalar piecewise(std::shared_ptr<const FinitePerimeterSet> interface,
                                     EvalFn inside, GradFn inside_grad, EvalFn outside,
                                     GradFn outside_grad);

    double eval(const Vec3& x) const;
    Vec3 gradient(const Vec3& x) const;
    /// Precise representative: one-sided values off the interface, half-sum
    /// on it.
    double precise(const Vec3& x) const;

    bool is_piecewise() const { return static_cast<bool>(interface_); }
    const FinitePerimeterSet& interface() const { return *interface_; }
    double jump(const Vec3& x) const;  // inside minus outside value

  private:
    std::shared_ptr<const FinitePerimeterSet> interface_;
    EvalFn inside_, outside_;
    GradFn inside_grad_, outside_grad_;
};

/// Residual of the product rule for Curl(gF) against one test function;
/// near zero, up to quadrature error, for admissible g and F.
Vec3 product_rule_residual(const VectorField& field, const PiecewiseScalar& g,
                           const TestFunction& phi, const Box& box, const QuadConfig& quad);

/// Total curl measure of a compactly supported field, evaluated through the
/// curl pairing with a plateau function that is 1 on the support. Must
/// vanish up to quadrature error.
Vec3 compact_support_total(const VectorField& field, const Box& box, const QuadConfig& quad);

/// Density of the measure's surface part on the reduced boundary of `set`
/// at x (its Radon-Nikodym derivative with respect to the surface measure);
/// zero when the measure has no surface part there.
Vec3 jump_density(const CurlMeasure& mu, const FinitePerimeterSet& set, const Vec3& x);

}  // namespace curltrace
