#include "curltrace/trace.hpp"

#include <cmath>
#include <numbers>

#include "curltrace/errors.hpp"
#include "curltrace/rng.hpp"
#include "curltrace/scenarios.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace curltrace;

namespace {
const Box kBox{};
const double kPi = std::numbers::pi;

std::vector<double> geometric_radii(double r0, int levels) {
    return TraceConfig{r0, levels, 0, 0}.schedule();
}
}  // namespace

TEST_CASE("richardson extrapolation") {
    const auto radii = geometric_radii(0.1, 6);
    SUBCASE("exactly constant values return the constant with zero error") {
        const std::vector<Vec3> values(radii.size(), Vec3{1.5, -0.5, 2.0});
        const RichardsonFit fit = richardson_extrapolate(radii, values);
        CHECK(norm(fit.value - Vec3{1.5, -0.5, 2.0}) <= 1e-14);
        CHECK(fit.error <= 1e-14);
        CHECK_FALSE(fit.fallback);
    }
    SUBCASE("an exact linear model is recovered") {
        const Vec3 q{0.3, -1.0, 2.5}, c{2.0, 1.0, -3.0};
        std::vector<Vec3> values;
        for (double r : radii) values.push_back(q + c * r);
        const RichardsonFit fit = richardson_extrapolate(radii, values);
        CHECK(norm(fit.value - q) <= 1e-12);
        CHECK(fit.error <= 1e-12);
    }
    SUBCASE("noisy linear data lands within three lever-scaled sigmas") {
        const Vec3 q{1.0, 0.0, -2.0}, c{0.5, -1.5, 1.0};
        const double sigma = 1e-3;
        Rng rng(2024);
        std::vector<Vec3> values;
        for (double r : radii) {
            // Symmetric noise from paired uniforms.
            auto noise = [&] { return sigma * (rng.next_double() + rng.next_double() - 1.0); };
            values.push_back(q + c * r + Vec3{noise(), noise(), noise()});
        }
        const RichardsonFit fit = richardson_extrapolate(radii, values);
        const double lever = oracle::intercept_lever(radii);
        CHECK(norm(fit.value - q) <= 3.0 * sigma * lever * std::sqrt(3.0));
    }
    SUBCASE("insufficient or unsorted levels are rejected") {
        CHECK_THROWS_AS((void)richardson_extrapolate({0.1, 0.05}, {Vec3{}, Vec3{}}),
                        InsufficientLevelsError);
        CHECK_THROWS_AS(
            (void)richardson_extrapolate({0.1, 0.2, 0.05}, {Vec3{}, Vec3{}, Vec3{}}),
            InsufficientLevelsError);
    }
}

TEST_CASE("half-ball integral of a constant pins the normalization") {
    const Vec3 c{1.0, 2.0, 3.0};
    const VectorField field = VectorField::constant(c);
    const Vec3 x{0.2, -0.1, 0.3};
    const Vec3 nu = normalized(Vec3{1, 1, 0});
    for (double r : {0.2, 0.05}) {
        const McVec3 est = half_ball_integral(field, x, nu, r, 50000, 3, kBox);
        const Vec3 expected = oracle::cross(c, nu) * (kPi * r * r * r / 3.0);
        CHECK(norm(est.value - expected) <= 3.0 * est.std_error + 1e-12);
    }
    const VectorField zero = VectorField::constant({0, 0, 0});
    const McVec3 z = half_ball_integral(zero, x, nu, 0.1, 2000, 3, kBox);
    CHECK(norm(z.value) == 0.0);
    CHECK_THROWS_AS((void)half_ball_integral(field, {3.95, 0, 0}, nu, 0.2, 100, 3, kBox),
                    OutsideDomainError);
}

TEST_CASE("interior and exterior traces on the golden scenarios") {
    const auto radii = geometric_radii(0.1, 6);
    SUBCASE("half-space") {
        const GoldenScenario s = golden_half_space({1, 0, 0}, {0, 1, 0});
        const Vec3 x{0.3, -0.4, 0.0};
        const auto ti = interior_trace_at(s.field, *s.set, x, geometric_radii(0.25, 6), 50000,
                                          7, kBox);
        CHECK(norm(ti.extrapolated - Vec3{0, -1, 0}) <= 5e-3);
        const auto te = exterior_trace_at(s.field, *s.set, x, geometric_radii(0.25, 6), 50000,
                                          8, kBox);
        CHECK(norm(te.extrapolated - Vec3{1, 0, 0}) <= 5e-3);
        CHECK(norm(mean_trace_q0(ti, te) - Vec3{0.5, -0.5, 0}) <= 5e-3);
        CHECK(norm(jump_from_traces(ti, te) - Vec3{1, 1, 0}) <= 1e-2);
    }
    SUBCASE("ball at the equator point") {
        const GoldenScenario s = golden_ball();
        const Vec3 x{1, 0, 0};
        const auto ti = interior_trace_at(s.field, *s.set, x, radii, 50000, 5, kBox);
        CHECK(norm(ti.extrapolated - Vec3{0, 0, 1}) <= 2e-2);
        const auto te = exterior_trace_at(s.field, *s.set, x, radii, 50000, 6, kBox);
        CHECK(norm(te.extrapolated - Vec3{0, 0, 2}) <= 2e-2);
        CHECK(norm(mean_trace_q0(ti, te) - Vec3{0, 0, 1.5}) <= 2e-2);
        CHECK(norm(jump_from_traces(ti, te) - Vec3{0, 0, 1}) <= 3e-2);
        CHECK(ti.tangential_defect <= 2e-2 * (1 + s.sup_bound()));
    }
    SUBCASE("smooth field: both traces equal F x nu") {
        const GoldenScenario s = golden_ball();
        const VectorField smooth = VectorField::smooth(
            [](const Vec3& p) { return Vec3{-p.y, p.x, 0.0}; }, std::sqrt(32.0));
        const Vec3 x{0, 1, 0};
        const Vec3 expected = oracle::cross({-1, 0, 0}, {0, -1, 0});
        const auto ti = interior_trace_at(smooth, *s.set, x, radii, 50000, 9, kBox);
        const auto te = exterior_trace_at(smooth, *s.set, x, radii, 50000, 9, kBox);
        CHECK(norm(ti.extrapolated - expected) <= 1e-2);
        CHECK(norm(te.extrapolated - expected) <= 1e-2);
        CHECK(norm(jump_from_traces(ti, te)) <= 1e-2);
    }
    SUBCASE("cube: zero trace on the singular face") {
        const GoldenScenario s = golden_cube();
        const Vec3 face_point =
            s.set->cube_corner() + s.set->cube_rotation().apply({0.5, 0.5, 0.0});
        const auto ti = interior_trace_at(s.field, *s.set, face_point,
                                          geometric_radii(0.05, 6), 50000, 13, kBox);
        CHECK(norm(ti.extrapolated) <= 3e-2);
    }
}

TEST_CASE("per-radius values stay within the field bound") {
    const GoldenScenario s = golden_ball();
    const auto radii = geometric_radii(0.1, 6);
    for (const auto& sample : s.set->sample_boundary(4, 31)) {
        const auto est =
            interior_trace_at(s.field, *s.set, sample.point, radii, 20000, 17, kBox);
        for (const Vec3& v : est.values) {
            CHECK(norm(v) <= s.sup_bound() + 3.0 * est.std_error);
        }
    }
}

TEST_CASE("point mismatch is rejected") {
    const GoldenScenario s = golden_half_space({1, 0, 0}, {0, 1, 0});
    const auto radii = geometric_radii(0.25, 4);
    const auto a = interior_trace_at(s.field, *s.set, {0, 0, 0}, radii, 2000, 1, kBox);
    const auto b = exterior_trace_at(s.field, *s.set, {1, 0, 0}, radii, 2000, 1, kBox);
    CHECK_THROWS_AS((void)mean_trace_q0(a, b), PointMismatchError);
    CHECK_THROWS_AS((void)jump_from_traces(a, b), PointMismatchError);
}

TEST_CASE("mollified boundary traces converge to the mean tangential trace") {
    const MollifyConfig cfg{0.2, 6, 20000, 5};
    SUBCASE("half-space: the average of the one-sided traces") {
        const GoldenScenario s = golden_half_space({1, 0, 0}, {0, 1, 0});
        const Vec3 q0 = mollified_boundary_trace(s.field, *s.set, {0.3, 0.1, 0}, cfg, kBox);
        CHECK(norm(q0 - Vec3{0.5, -0.5, 0}) <= 1e-2);
    }
    SUBCASE("ball pole: both one-sided limits vanish") {
        const GoldenScenario s = golden_ball();
        const Vec3 q0 = mollified_boundary_trace(s.field, *s.set, {0, 0, 1}, cfg, kBox);
        CHECK(norm(q0) <= 1e-2);
    }
    SUBCASE("smooth field: F x nu") {
        const GoldenScenario s = golden_ball();
        const VectorField smooth = VectorField::smooth(
            [](const Vec3& p) { return Vec3{-p.y, p.x, 0.0}; }, std::sqrt(32.0));
        const Vec3 q0 = mollified_boundary_trace(smooth, *s.set, {1, 0, 0}, cfg, kBox);
        CHECK(norm(q0 - Vec3{0, 0, 1}) <= 1e-2);
    }
}

TEST_CASE("trace tables are deterministic and carry the fixed column order") {
    const GoldenScenario s = golden_ball();
    const TraceConfig cfg{0.1, 4, 4000, 42};
    const auto rows1 = trace_table(s, 6, cfg);
    const auto rows2 = trace_table(s, 6, cfg);
    REQUIRE(rows1.size() == 6);
    const std::string csv1 = trace_table_csv(rows1);
    const std::string csv2 = trace_table_csv(rows2);
    CHECK(csv1 == csv2);
    CHECK(csv1.rfind("point_x,point_y,point_z,nu_x,nu_y,nu_z,", 0) == 0);
    for (const auto& row : rows1) CHECK(row.flag == "ok");
}
