// test_quadrature.cpp - adaptive Gauss-Kronrod integration.

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "zeno/errors.hpp"
#include "zeno/quadrature.hpp"

using namespace zeno;

TEST_CASE("smooth integrands") {
    CHECK(quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value ==
          doctest::Approx(2.0).epsilon(1e-13));
    CHECK(quad::integrate([](double x) { return std::exp(x); }, -1.0, 2.0).value ==
          doctest::Approx(std::exp(2.0) - std::exp(-1.0)).epsilon(1e-13));
    CHECK(quad::integrate([](double) { return 0.0; }, 0.0, 1.0).value == 0.0);
}

TEST_CASE("endpoint singularity and interior kinks") {
    const auto r = quad::integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(r.error < 1e-8);
    const std::vector<double> pts{0.0, 0.3, 1.0};
    CHECK(quad::integrate([](double x) { return std::abs(x - 0.3); }, pts).value ==
          doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-14));
}

TEST_CASE("sharp peak") {
    const double eps = 1e-4;
    const double exact = 2.0 * std::atan(1.0 / std::sqrt(eps)) / std::sqrt(eps);
    const auto r = quad::integrate([&](double x) { return 1.0 / (eps + x * x); }, -1.0, 1.0, {.rel_tol = 1e-10});
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("breakpoints must be ascending") {
    CHECK_THROWS_AS(quad::integrate([](double x) { return x * x; }, 1.0, 0.0), Error);
    CHECK(quad::integrate([](double x) { return x * x; }, 1.0, 1.0).value == 0.0);
}

TEST_CASE("exhausted budget reports estimate and bound") {
    const auto f = [](double x) { return std::sin(1.0 / (x + 1e-3)); };
    try {
        quad::integrate(f, 0.0, 1.0, {.rel_tol = 1e-14, .abs_tol = 0.0, .max_intervals = 3});
        FAIL("expected QuadratureError");
    } catch (const QuadratureError& e) {
        CHECK(e.kind() == ErrorKind::QuadratureNonConvergence);
        CHECK(std::isfinite(e.estimate()));
        CHECK(e.error_bound() > 0.0);
    }
}
