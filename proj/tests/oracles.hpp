#pragma once

// Independent oracles used to freeze expected values in the tests. These
// deliberately avoid the library's code paths: plain formulas and 1-D
// quadrature only.

#include <cmath>
#include <functional>

#include "curltrace/vec3.hpp"

namespace oracle {

inline curltrace::Vec3 cross(const curltrace::Vec3& a, const curltrace::Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// Composite Simpson on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    double sum = 0.0;
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) {
        const double x0 = a + i * h;
        sum += h / 6.0 * (f(x0) + 4.0 * f(x0 + 0.5 * h) + f(x0 + h));
    }
    return sum;
}

/// Integral over the unit sphere of a function of the z-coordinate
/// (the area element in z is the constant 2 pi dz).
inline double sphere_z_integral(const std::function<double(double)>& f) {
    return 2.0 * 3.14159265358979323846 * simpson(f, -1.0, 1.0, 4096);
}

/// Volume integral of the radial bump exp(1 - 1/(1 - (t/R)^2)) over R^3.
inline double bump_volume_integral(double radius) {
    const double unit = simpson(
        [](double t) {
            if (t >= 1.0) return 0.0;
            return 4.0 * 3.14159265358979323846 * t * t * std::exp(1.0 - 1.0 / (1.0 - t * t));
        },
        0.0, 1.0, 4096);
    return radius * radius * radius * unit;
}

/// Standard error multiplier of the least-squares intercept for abscissae r.
inline double intercept_lever(const std::vector<double>& r) {
    const double n = static_cast<double>(r.size());
    double sum = 0.0, sumsq = 0.0;
    for (double v : r) {
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / n;
    const double srr = sumsq - n * mean * mean;
    return std::sqrt(1.0 / n + mean * mean / srr);
}

}  // namespace oracle
