#include "curltrace/scenarios.hpp"

#include <cmath>

#include "curltrace/errors.hpp"

namespace curltrace {

GoldenScenario golden_half_space(const Vec3& F1, const Vec3& F2) {
    GoldenScenario s;
    s.name = "half_space";
    s.working_box = Box{};
    auto set = std::make_shared<FinitePerimeterSet>(
        FinitePerimeterSet::half_space({0, 0, 1}, 0.0, Window{{0, 0, 0}, 2.5}));
    s.set = set;
    s.field = VectorField::piecewise(set, VectorField::constant(F1), VectorField::constant(F2));
    const Vec3 nu{0, 0, 1};
    s.curl = CurlMeasure::zero().add_surface_part(
        set, [F1, F2, nu](const Vec3&) { return cross(F2 - F1, nu); });
    s.interior_trace = [F1, nu](const Vec3&) { return cross(F1, nu); };
    s.exterior_trace = [F2, nu](const Vec3&) { return cross(F2, nu); };
    return s;
}

GoldenScenario golden_ball() {
    GoldenScenario s;
    s.name = "ball";
    s.working_box = Box{};
    auto set = std::make_shared<FinitePerimeterSet>(FinitePerimeterSet::ball({0, 0, 0}, 1.0));
    s.set = set;

    auto rotation = [](const Vec3& p) { return Vec3{-p.y, p.x, 0.0}; };
    const double box_reach = std::sqrt(32.0);  // max sqrt(x^2 + y^2) over the box
    const VectorField inside =
        VectorField::smooth(rotation, 1.0).with_curl_density([](const Vec3&) {
            return Vec3{0, 0, 2};
        });
    const VectorField outside =
        VectorField::smooth([rotation](const Vec3& p) { return rotation(p) * 2.0; },
                            2.0 * box_reach)
            .with_curl_density([](const Vec3&) { return Vec3{0, 0, 4}; });
    s.field = VectorField::piecewise(set, inside, outside);

    s.curl = CurlMeasure::zero()
                 .set_volume_density([set](const Vec3& p) {
                     return set->contains(p) ? Vec3{0, 0, 2} : Vec3{0, 0, 4};
                 })
                 .add_surface_part(set, [](const Vec3& p) {
                     return Vec3{-p.x * p.z, -p.y * p.z, 1.0 - p.z * p.z};
                 });

    auto nu_of = [set](const Vec3& p) { return set->inner_normal(p); };
    s.interior_trace = [rotation, nu_of](const Vec3& p) { return cross(rotation(p), nu_of(p)); };
    s.exterior_trace = [rotation, nu_of](const Vec3& p) {
        return cross(rotation(p) * 2.0, nu_of(p));
    };
    return s;
}

namespace {

Vec3 cube_sin_field(const Vec3& p) {
    const double s = p.x + p.y + p.z;
    const double v = std::sin(1.0 / s);
    return {v, v, v};
}

double plane_distance(const Vec3& p) {
    return std::abs(p.x + p.y + p.z) / std::sqrt(3.0);
}

}  // namespace

GoldenScenario golden_cube() {
    GoldenScenario s;
    s.name = "cube";
    s.working_box = Box{};
    const Vec3 n = Vec3{1, 1, 1} / std::sqrt(3.0);
    auto set = std::make_shared<FinitePerimeterSet>(
        FinitePerimeterSet::oriented_cube(n, {0, 0, 0}, 1.0));
    s.set = set;
    s.field = VectorField::smooth(cube_sin_field, std::sqrt(3.0))
                  .with_singular_distance(plane_distance)
                  .with_curl_density([](const Vec3&) { return Vec3{0, 0, 0}; });
    s.curl = CurlMeasure::zero();
    auto on_plane_face = [](const Vec3& p) { return plane_distance(p) <= 1e-9; };
    s.interior_trace = [set, on_plane_face](const Vec3& p) -> Vec3 {
        if (on_plane_face(p)) return {0, 0, 0};
        return cross(cube_sin_field(p), set->inner_normal(p));
    };
    s.exterior_trace = s.interior_trace;  // zero curl measure: no jump anywhere
    return s;
}

GoldenScenario perturb_with_gradient(const GoldenScenario& scenario, const GradientField& f) {
    GoldenScenario s = scenario;
    s.name = scenario.name + "_gradient";
    const VectorField base = scenario.field;
    const double bound = base.sup_bound() + f.gradient_bound;
    auto grad = f.gradient;
    VectorField perturbed = VectorField::smooth(
        [base, grad](const Vec3& p) { return base.eval(p) + grad(p); }, bound);
    perturbed = perturbed.with_singular_distance(
        [base](const Vec3& p) { return base.singular_distance(p); });
    if (base.has_curl_density()) {
        perturbed = perturbed.with_curl_density(
            [base](const Vec3& p) { return base.curl_density(p); });
    }
    s.field = perturbed;
    if (scenario.interior_trace) {
        auto it = scenario.interior_trace;
        auto set = scenario.set;
        s.interior_trace = [it, grad, set](const Vec3& p) {
            return it(p) + cross(grad(p), set->inner_normal(p));
        };
    }
    if (scenario.exterior_trace) {
        auto et = scenario.exterior_trace;
        auto set = scenario.set;
        s.exterior_trace = [et, grad, set](const Vec3& p) {
            return et(p) + cross(grad(p), set->inner_normal(p));
        };
    }
    return s;
}

}  // namespace curltrace
