#include "pmesim/quadrature.hpp"
#include "pmesim/units.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace pmesim;

TEST_CASE("finite-interval adaptive quadrature") {
    const auto q = integrate_adaptive([](double x) { return std::sin(x); }, 0.0,
                                      std::numbers::pi, {.rel_tol = 1e-10});
    CHECK(q.converged);
    CHECK(q.value == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(q.error < 1e-8);
}

TEST_CASE("real-line quadrature with tan substitution") {
    SUBCASE("gaussian") {
        const auto q = integrate_real_line(
            [](double x) { return std::exp(-x * x); }, 1.0, {.rel_tol = 1e-10});
        CHECK(q.converged);
        CHECK(q.value == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-9));
    }
    SUBCASE("wide lorentzian with mismatched scale") {
        const double g = 250.0;
        const auto q = integrate_real_line(
            [&](double x) {
                return (1.0 / two_pi) * g / (x * x + g * g / 4.0);
            },
            g, {.rel_tol = 1e-10});
        CHECK(q.value == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("narrow feature resolved via focus seeding") {
        const double w0 = 1e-4;
        RealLineOptions opt;
        opt.rel_tol = 1e-9;
        opt.focus_halfwidth = 10.0 * w0;
        const auto q = integrate_real_line(
            [&](double x) {
                return (1.0 / std::numbers::pi) * w0 / (x * x + w0 * w0);
            },
            1.0, opt);
        CHECK(q.converged);
        CHECK(q.value == doctest::Approx(1.0).epsilon(1e-7));
    }
}

TEST_CASE("non-convergence is reported, not silently accepted") {
    QuadratureOptions opt;
    opt.rel_tol = 1e-14;
    opt.max_panels = 4;
    const auto q = integrate_adaptive(
        [](double x) { return std::cos(40.0 * x * x); }, 0.0, 10.0, opt);
    CHECK_FALSE(q.converged);
}

TEST_CASE("scale must be positive") {
    CHECK_THROWS_AS(integrate_real_line([](double) { return 0.0; }, 0.0, {}),
                    DomainError);
}
