#pragma once

#include <functional>
#include <memory>
#include <string>

#include "curltrace/fields.hpp"
#include "curltrace/geometry.hpp"
#include "curltrace/measure.hpp"

namespace curltrace {

/// A field/set pair with closed-form curl measure and, where available,
/// closed-form one-sided traces on the reduced boundary. These are the
/// library's golden scenarios; every verification suite runs against them.
struct GoldenScenario {
    std::string name;
    VectorField field;
    std::shared_ptr<const FinitePerimeterSet> set;
    CurlMeasure curl;
    Box working_box;
    /// Closed-form traces at boundary points (null when unknown).
    std::function<Vec3(const Vec3&)> interior_trace;
    std::function<Vec3(const Vec3&)> exterior_trace;

    double sup_bound() const { return field.sup_bound(); }
    bool has_closed_form_traces() const {
        return static_cast<bool>(interior_trace) && static_cast<bool>(exterior_trace);
    }
};

/// Piecewise-constant field jumping across the plane {z = 0}, inner normal
/// (0, 0, 1): F1 above, F2 below. The curl concentrates on the plane with
/// density (F2 - F1) x nu; traces are F1 x nu and F2 x nu.
GoldenScenario golden_half_space(const Vec3& F1, const Vec3& F2);

/// Rigid rotation about the z-axis inside the unit ball, twice the angular
/// velocity outside: volume curl (0,0,2) / (0,0,4) plus a spherical sheet
/// with density (-xz, -yz, 1 - z^2).
GoldenScenario golden_ball();

/// The unit cube with one face in the plane {x + y + z = 0}, carrying the
/// bounded field sin(1/(x+y+z))(1,1,1) whose curl measure vanishes; the
/// interior trace is zero on that face and F(a) x nu elsewhere.
GoldenScenario golden_cube();

/// Replace F by F + grad f: the curl measure is unchanged and both traces
/// gain grad f x nu pointwise.
GoldenScenario perturb_with_gradient(const GoldenScenario& scenario, const GradientField& f);

}  // namespace curltrace
