#include "curltrace/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "curltrace/errors.hpp"
#include "curltrace/rng.hpp"

namespace curltrace {

namespace {

constexpr double kUnitTol = 1e-12;

void require_unit(const Vec3& v, const char* what) {
    if (!is_finite(v) || std::abs(norm(v) - 1.0) > kUnitTol) {
        throw Error(std::string(what) + ": expected a unit vector");
    }
}

// Local box coordinates of x for a cube: u = R^T (x - corner), inside iff
// all components lie in (0, side).
Vec3 cube_local(const Mat3& rot, const Vec3& corner, const Vec3& x) {
    return rot.apply_transposed(x - corner);
}

double cube_signed_distance(const Vec3& u, double side) {
    // Componentwise distance past each face, positive means outside.
    const double qx = std::max(-u.x, u.x - side);
    const double qy = std::max(-u.y, u.y - side);
    const double qz = std::max(-u.z, u.z - side);
    const double q = std::max({qx, qy, qz});
    if (q <= 0.0) return -q;  // inside: distance to the nearest face
    const double ox = std::max(qx, 0.0);
    const double oy = std::max(qy, 0.0);
    const double oz = std::max(qz, 0.0);
    return -std::sqrt(ox * ox + oy * oy + oz * oz);
}

}  // namespace

const char* to_string(PointClass c) {
    switch (c) {
        case PointClass::Interior: return "Interior";
        case PointClass::Exterior: return "Exterior";
        default: return "ReducedBoundary";
    }
}

FinitePerimeterSet FinitePerimeterSet::half_space(const Vec3& inner_normal, double offset,
                                                  std::optional<Window> window) {
    require_unit(inner_normal, "half_space inner_normal");
    FinitePerimeterSet s;
    s.kind_ = Kind::HalfSpace;
    s.normal_ = inner_normal;
    s.offset_ = offset;
    s.window_ = window;
    s.band_ = 1e-9 * s.diameter();
    return s;
}

FinitePerimeterSet FinitePerimeterSet::ball(const Vec3& center, double radius) {
    if (!is_finite(center) || !(radius > 0.0) || !std::isfinite(radius)) {
        throw Error("ball: center must be finite and radius positive");
    }
    FinitePerimeterSet s;
    s.kind_ = Kind::Ball;
    s.center_ = center;
    s.radius_ = radius;
    s.band_ = 1e-9 * s.diameter();
    return s;
}

FinitePerimeterSet FinitePerimeterSet::oriented_cube(const Vec3& face_plane_normal,
                                                     const Vec3& corner, double side) {
    require_unit(face_plane_normal, "oriented_cube face_plane_normal");
    if (!is_finite(corner) || !(side > 0.0) || !std::isfinite(side)) {
        throw Error("oriented_cube: corner must be finite and side positive");
    }
    const Vec3 n = face_plane_normal;
    Vec3 c0, c1;
    const Vec3 nxz = cross(n, Vec3{0, 0, 1});
    if (norm(nxz) > kUnitTol) {
        c0 = normalized(nxz);
        c1 = cross(n, c0);
    } else if (n.z > 0.0) {
        c0 = {1, 0, 0};  // axis-aligned cube, identity rotation
        c1 = {0, 1, 0};
    } else {
        c0 = {1, 0, 0};
        c1 = cross(n, c0);
    }
    FinitePerimeterSet s;
    s.kind_ = Kind::Cube;
    s.corner_ = corner;
    s.side_ = side;
    s.rotation_ = Mat3::from_columns(c0, c1, n);
    s.band_ = 1e-9 * s.diameter();
    return s;
}

double FinitePerimeterSet::signed_distance(const Vec3& x) const {
    switch (kind_) {
        case Kind::HalfSpace:
            return dot(normal_, x) - offset_;
        case Kind::Ball:
            return radius_ - norm(x - center_);
        default:
            return cube_signed_distance(cube_local(rotation_, corner_, x), side_);
    }
}

PointClass FinitePerimeterSet::classify(const Vec3& x) const {
    const double d = signed_distance(x);
    if (d > band_) return PointClass::Interior;
    if (d < -band_) return PointClass::Exterior;
    return PointClass::ReducedBoundary;
}

Vec3 FinitePerimeterSet::inner_normal(const Vec3& x) const {
    switch (kind_) {
        case Kind::HalfSpace:
            return normal_;
        case Kind::Ball: {
            const Vec3 d = center_ - x;
            const double n = norm(d);
            if (n == 0.0) throw Error("inner_normal: ball center has no normal");
            return d / n;
        }
        default: {
            const Vec3 u = cube_local(rotation_, corner_, x);
            // Distance to each face pair's planes; the active face is the
            // one whose plane x sits on, within the classify band.
            const double d[3] = {std::min(std::abs(u.x), std::abs(u.x - side_)),
                                 std::min(std::abs(u.y), std::abs(u.y - side_)),
                                 std::min(std::abs(u.z), std::abs(u.z - side_))};
            int near = 0;
            for (double da : d) {
                if (da <= band_) ++near;
            }
            if (near >= 2) {
                throw EdgePointError("inner_normal: point lies on a cube edge or corner");
            }
            int axis = 0;
            if (d[1] < d[axis]) axis = 1;
            if (d[2] < d[axis]) axis = 2;
            const double lo = std::abs(axis == 0 ? u.x : (axis == 1 ? u.y : u.z));
            const double hi = std::abs((axis == 0 ? u.x : (axis == 1 ? u.y : u.z)) - side_);
            const Vec3 col = rotation_.column(axis);
            return lo <= hi ? col : -col;
        }
    }
}

double FinitePerimeterSet::perimeter() const {
    switch (kind_) {
        case Kind::HalfSpace: {
            if (!window_) {
                throw UnboundedSurfaceError(
                    "perimeter: half-space requires a bounding window");
            }
            const double s = 2.0 * window_->half_side;
            return s * s;
        }
        case Kind::Ball:
            return 4.0 * std::numbers::pi * radius_ * radius_;
        default:
            return 6.0 * side_ * side_;
    }
}

double FinitePerimeterSet::feature_size() const {
    switch (kind_) {
        case Kind::HalfSpace:
            return window_ ? window_->half_side : 1.0;
        case Kind::Ball:
            return radius_;
        default:
            return 0.5 * side_;
    }
}

double FinitePerimeterSet::diameter() const {
    switch (kind_) {
        case Kind::HalfSpace:
            return window_ ? 2.0 * std::numbers::sqrt2 * window_->half_side : 2.0;
        case Kind::Ball:
            return 2.0 * radius_;
        default:
            return side_ * std::sqrt(3.0);
    }
}

namespace {

// Midpoint grid over an a x b tiling of a rectangle spanned by (eu, ev) from
// origin `base`; weight is area / (a*b) so the stratum integrates exactly.
void emit_grid(std::vector<SurfaceSample>& out, const Vec3& base, const Vec3& eu, const Vec3& ev,
               double len_u, double len_v, std::size_t a, std::size_t b, const Vec3& normal,
               double area) {
    const double w = area / static_cast<double>(a * b);
    for (std::size_t i = 0; i < a; ++i) {
        const double fu = (static_cast<double>(i) + 0.5) / static_cast<double>(a);
        for (std::size_t j = 0; j < b; ++j) {
            const double fv = (static_cast<double>(j) + 0.5) / static_cast<double>(b);
            out.push_back({base + eu * (fu * len_u) + ev * (fv * len_v), normal, w});
        }
    }
}

// Smallest a x b grid holding at least m nodes, as square as possible.
std::pair<std::size_t, std::size_t> grid_dims(std::size_t m) {
    const auto a = static_cast<std::size_t>(
        std::max(1.0, std::floor(std::sqrt(static_cast<double>(m)))));
    const std::size_t b = (m + a - 1) / a;
    return {a, b};
}

}  // namespace

std::vector<SurfaceSample> FinitePerimeterSet::sample_boundary(std::size_t n,
                                                               std::uint64_t seed) const {
    if (n < 1) throw Error("sample_boundary: need n >= 1");
    std::vector<SurfaceSample> out;
    switch (kind_) {
        case Kind::Ball: {
            // Fibonacci lattice; the seed rotates the azimuth so distinct
            // seeds give distinct, equally well-distributed point sets.
            out.reserve(n);
            const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
            Rng rng(derive_seed(seed, tag("sphere-lattice")));
            const double phase = 2.0 * std::numbers::pi * rng.next_double();
            const double w = perimeter() / static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
                const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
                const double phi = phase + golden * static_cast<double>(i);
                const Vec3 dir{rho * std::cos(phi), rho * std::sin(phi), z};
                out.push_back({center_ + dir * radius_, -dir, w});
            }
            return out;
        }
        case Kind::Cube: {
            const double face_area = side_ * side_;
            std::size_t face = 0;
            for (int axis = 0; axis < 3; ++axis) {
                for (int hi = 0; hi < 2; ++hi, ++face) {
                    std::size_t m = n / 6 + (face < n % 6 ? 1 : 0);
                    if (m == 0) m = 1;
                    const auto [a, b] = grid_dims(m);
                    const int ua = (axis + 1) % 3;
                    const int va = (axis + 2) % 3;
                    const Vec3 eu = rotation_.column(ua);
                    const Vec3 ev = rotation_.column(va);
                    const Vec3 en = rotation_.column(axis);
                    const Vec3 base = corner_ + (hi ? en * side_ : Vec3{0, 0, 0});
                    const Vec3 normal = hi ? -en : en;
                    emit_grid(out, base, eu, ev, side_, side_, a, b, normal, face_area);
                }
            }
            return out;
        }
        default: {
            if (!window_) {
                throw UnboundedSurfaceError(
                    "sample_boundary: half-space requires a bounding window");
            }
            const auto [a, b] = grid_dims(n);
            Vec3 e1, e2;
            orthonormal_frame(normal_, e1, e2);
            // Project the window center onto the boundary plane.
            const Vec3 c = window_->center - normal_ * (dot(normal_, window_->center) - offset_);
            const double h = window_->half_side;
            const Vec3 base = c - e1 * h - e2 * h;
            emit_grid(out, base, e1, e2, 2.0 * h, 2.0 * h, a, b, normal_, perimeter());
            return out;
        }
    }
}

bool FinitePerimeterSet::same_shape(const FinitePerimeterSet& o) const {
    if (kind_ != o.kind_) return false;
    const auto close = [](const Vec3& a, const Vec3& b) { return norm(a - b) <= 1e-12; };
    switch (kind_) {
        case Kind::HalfSpace:
            return close(normal_, o.normal_) && std::abs(offset_ - o.offset_) <= 1e-12;
        case Kind::Ball:
            return close(center_, o.center_) && std::abs(radius_ - o.radius_) <= 1e-12;
        default:
            return close(corner_, o.corner_) && std::abs(side_ - o.side_) <= 1e-12 &&
                   close(rotation_.column(2), o.rotation_.column(2));
    }
}

}  // namespace curltrace
