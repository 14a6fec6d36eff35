#include "curltrace/mollify.hpp"

#include <cmath>

#include "curltrace/errors.hpp"
#include "curltrace/rng.hpp"
#include "curltrace/scenarios.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace curltrace;

namespace {
const Box kBox{};
}

TEST_CASE("kernel mass and linearity in the normalization constant") {
    CHECK(std::abs(mollifier_mass_check(4096, 1) - 1.0) <= 1e-6);
    CHECK(std::abs(mollifier_mass_check(4096, 1, 0.1) - 1.0) <= 1e-6);
    const Mollifier base;
    const Mollifier halved = Mollifier::with_constant(0.5 * base.normalization_constant());
    CHECK(std::abs(mollifier_mass_check(4096, 1, 1.0, halved) - 0.5) <= 1e-6);
}

TEST_CASE("kernel identities: support, symmetry, scaling, range") {
    const Mollifier kernel;
    CHECK(kernel.profile(0.0) <= 1.0);  // range in [0, 1]
    CHECK(kernel.profile(0.0) > 0.0);
    CHECK(kernel.profile(1.0) == 0.0);
    CHECK(kernel.profile(1.5) == 0.0);
    Rng rng(17);
    for (int i = 0; i < 500; ++i) {
        const Vec3 y{rng.next_double() * 3 - 1.5, rng.next_double() * 3 - 1.5,
                     rng.next_double() * 3 - 1.5};
        const double eps = 0.05 + rng.next_double();
        CHECK(kernel.density(y) >= 0.0);
        if (norm(y) >= 1.0) CHECK(kernel.density(y) == 0.0);
        CHECK(kernel.density(y) == kernel.density(-y));
        const double scaled = kernel.density_scaled(y, eps);
        CHECK(scaled ==
              doctest::Approx(kernel.profile(norm(y) / eps) / (eps * eps * eps)).epsilon(1e-14));
    }
}

TEST_CASE("mollified constant field is the constant") {
    const Vec3 c{1.5, -2.0, 0.5};
    const VectorField field = VectorField::constant(c);
    for (double eps : {0.5, 0.1}) {
        const McVec3 est = mollify_field(field, eps, {0.3, 0.2, -0.1}, 20000, 7, kBox);
        CHECK(norm(est.value - c) <= 3.0 * est.std_error + 1e-3 * norm(c));
    }
}

TEST_CASE("mollified jump field averages the one-sided values at the interface") {
    const GoldenScenario s = golden_half_space({1, 0, 0}, {0, 1, 0});
    const Vec3 x{0.4, -0.2, 0.0};
    const Vec3 mean{0.5, 0.5, 0.0};
    for (double eps : {0.2, 0.1, 0.05}) {
        const McVec3 est = mollify_field(s.field, eps, x, 20000, 5, kBox);
        CHECK(norm(est.value - mean) <= 3.0 * est.std_error + 2e-3);
    }
    // Deep inside E the kernel support never crosses the interface.
    const McVec3 deep = mollify_field(s.field, 0.1, {0, 0, 0.5}, 20000, 5, kBox);
    CHECK(norm(deep.value - Vec3{1, 0, 0}) <= 3.0 * deep.std_error + 2e-3);
}

TEST_CASE("mollify domain checks") {
    const VectorField field = VectorField::constant({1, 0, 0});
    CHECK_THROWS_AS((void)mollify_field(field, 0.5, {3.8, 0, 0}, 100, 1, kBox),
                    OutsideDomainError);
    CHECK_THROWS_AS((void)mollify_field(field, -0.1, {0, 0, 0}, 100, 1, kBox), Error);
}

TEST_CASE("one-sided mollification limits") {
    const GoldenScenario s = golden_ball();
    const TestFunction phi = TestFunction::bump({1, 0, 0}, 1.5);

    SUBCASE("deep interior point recovers phi") {
        const Vec3 x{0.7, 0, 0};
        const double v = one_sided_mollify(phi, *s.set, 0.01, x, 60000, 3, kBox);
        CHECK(std::abs(v - phi(x)) <= 0.02 * std::abs(phi(x)));
    }
    SUBCASE("reduced-boundary point gives half of phi") {
        const Vec3 x{1, 0, 0};
        const double v = one_sided_mollify(phi, *s.set, 0.01, x, 60000, 3, kBox);
        CHECK(std::abs(v - 0.5 * phi(x)) <= 0.02 * 0.5 * phi(x));
    }
    SUBCASE("points farther than eps from E read exactly zero") {
        const Vec3 x{1.5, 0, 0};
        CHECK(one_sided_mollify(phi, *s.set, 0.2, x, 5000, 3, kBox) == 0.0);
    }
}

TEST_CASE("one-sided mollification of 1 at a flat boundary is one half for every eps") {
    const GoldenScenario s = golden_half_space({1, 0, 0}, {0, 1, 0});
    const TestFunction one = TestFunction::plateau({0, 0, 0}, 1.5, 2.4);
    const Vec3 x{0.1, 0.2, 0.0};
    for (double eps : {0.4, 0.2, 0.1, 0.05}) {
        const double v = one_sided_mollify(one, *s.set, eps, x, 30000, 11, kBox);
        CHECK(std::abs(v - 0.5) <= 5e-3);
    }
}

TEST_CASE("epsilon schedules are geometric") {
    const MollifyConfig cfg{0.2, 7, 1000, 1};
    const auto eps = cfg.schedule();
    REQUIRE(eps.size() == 7);
    CHECK(eps.front() == doctest::Approx(0.2));
    CHECK(eps.back() == doctest::Approx(0.2 / 64.0));
    for (std::size_t k = 1; k < eps.size(); ++k) CHECK(eps[k] == doctest::Approx(eps[k - 1] / 2));
}
