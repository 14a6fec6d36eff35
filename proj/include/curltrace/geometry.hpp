#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "curltrace/vec3.hpp"

namespace curltrace {

/// Measure-theoretic classification of a point relative to a set.
enum class PointClass { Interior, Exterior, ReducedBoundary };

const char* to_string(PointClass c);

/// Quadrature node on the reduced boundary. The normal points into the set
/// and the weight is a surface-area weight; weights of a full sample sum to
/// the perimeter exactly.
struct SurfaceSample {
    Vec3 point;
    Vec3 inner_normal;
    double weight = 0.0;
};

/// Square sampling window for the (unbounded) half-space boundary.
struct Window {
    Vec3 center{0, 0, 0};
    double half_side = 2.0;
};

/// Analytic set of finite perimeter: half-space, ball, or oriented cube.
/// Values are immutable after construction and safe to share across threads.
class FinitePerimeterSet {
  public:
    enum class Kind { HalfSpace, Ball, Cube };

    /// E = {x : n.x > offset}, n the unit inner normal. The optional window
    /// bounds the boundary plane for sampling and perimeter reporting.
    static FinitePerimeterSet half_space(const Vec3& inner_normal, double offset,
                                         std::optional<Window> window = std::nullopt);

    static FinitePerimeterSet ball(const Vec3& center, double radius);

    /// Cube with one face in the plane through `corner` orthogonal to
    /// `face_plane_normal`, lying on the positive side of that plane. The
    /// rotation column for the face normal equals `face_plane_normal`.
    static FinitePerimeterSet oriented_cube(const Vec3& face_plane_normal, const Vec3& corner,
                                            double side);

    Kind kind() const { return kind_; }

    /// Signed distance to the boundary: positive inside E, negative outside.
    double signed_distance(const Vec3& x) const;

    /// Indicator with the convention that boundary points count as inside.
    bool contains(const Vec3& x) const { return signed_distance(x) >= 0.0; }

    /// Classify against the delta-band around the boundary; total function.
    PointClass classify(const Vec3& x) const;

    /// Unit vector at a boundary point, pointing into E. Throws
    /// EdgePointError on cube edges and corners where it is undefined.
    Vec3 inner_normal(const Vec3& x) const;

    /// Closed-form surface area of the reduced boundary (window-relative for
    /// the half-space). Throws UnboundedSurfaceError without a window.
    double perimeter() const;

    /// Deterministic boundary quadrature: Fibonacci lattice on the sphere,
    /// tensor midpoint grids on cube faces and the half-space window. Emits
    /// at least n samples (per-stratum counts round up to full grids); the
    /// weights always sum to perimeter() exactly. Never emits edge points.
    std::vector<SurfaceSample> sample_boundary(std::size_t n, std::uint64_t seed) const;

    /// Radius-like length scale: ball radius, cube half-side, window half-side.
    double feature_size() const;

    double diameter() const;

    /// Boundary-detection tolerance, 1e-9 * diameter by default.
    double classify_band() const { return band_; }
    void set_classify_band(double band) { band_ = band; }

    // Shape parameter accessors (valid for the matching kind only).
    const Vec3& half_space_normal() const { return normal_; }
    double half_space_offset() const { return offset_; }
    const std::optional<Window>& window() const { return window_; }
    const Vec3& ball_center() const { return center_; }
    double ball_radius() const { return radius_; }
    const Vec3& cube_corner() const { return corner_; }
    double cube_side() const { return side_; }
    const Mat3& cube_rotation() const { return rotation_; }

    /// Geometric equality within 1e-12, used to match measure parts to sets.
    bool same_shape(const FinitePerimeterSet& o) const;

  private:
    FinitePerimeterSet() = default;

    Kind kind_ = Kind::Ball;
    double band_ = 0.0;
    // half-space
    Vec3 normal_{0, 0, 1};
    double offset_ = 0.0;
    std::optional<Window> window_;
    // ball
    Vec3 center_{0, 0, 0};
    double radius_ = 1.0;
    // cube
    Vec3 corner_{0, 0, 0};
    double side_ = 1.0;
    Mat3 rotation_;
};

// Free functions mirroring the library's operation surface.
inline PointClass classify_point(const FinitePerimeterSet& set, const Vec3& x) {
    return set.classify(x);
}
inline Vec3 inner_normal(const FinitePerimeterSet& set, const Vec3& x) {
    return set.inner_normal(x);
}
inline double perimeter(const FinitePerimeterSet& set) { return set.perimeter(); }
inline std::vector<SurfaceSample> sample_boundary(const FinitePerimeterSet& set, std::size_t n,
                                                  std::uint64_t seed) {
    return set.sample_boundary(n, seed);
}
inline FinitePerimeterSet build_oriented_cube(const Vec3& face_plane_normal, const Vec3& corner,
                                              double side) {
    return FinitePerimeterSet::oriented_cube(face_plane_normal, corner, side);
}

}  // namespace curltrace
