// test_rates.cpp - Golden Rule, kernel-convolved rates and their closed forms.

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "zeno/errors.hpp"
#include "zeno/rates.hpp"

using namespace zeno;
using namespace zeno::rates;
using spectral::DissipationKernel;
using spectral::SpectralDensity;

namespace {

constexpr double pi = std::numbers::pi;

// 2 pi c * (1/pi) [atan((b - x0)/w) - atan((a - x0)/w)]: flat density on [a, b]
// convolved with a unit Lorentzian of width w centred at x0.
double arctan_oracle(double c, double a, double b, double w, double x0) {
    return 2.0 * c * (std::atan((b - x0) / w) - std::atan((a - x0) / w));
}

// Composite Simpson on a fine uniform grid, used as a brute-force reference.
template <class F>
double simpson(F f, double a, double b, std::size_t n) {
    const double h = (b - a) / static_cast<double>(n);
    double s = f(a) + f(b);
    for (std::size_t i = 1; i < n; ++i) s += f(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace

TEST_CASE("golden rule examples") {
    const auto flat = SpectralDensity::flat(1.0 / (2 * pi), 0.0, 10.0);
    CHECK(golden_rule_gamma(flat, 5.0).gamma == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(golden_rule_gamma(flat, 12.0).gamma == 0.0);
    const auto cubic = SpectralDensity::power_law(1.0, 3.0, 0.0, 2.0);
    CHECK(golden_rule_gamma(cubic, 1.0).gamma == doctest::Approx(2 * pi).epsilon(1e-15));
}

TEST_CASE("Dirac kernel reduces to the golden rule exactly") {
    std::mt19937_64 rng(20261016);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double lo = -5.0 + 5.0 * u(rng);
        const double hi = lo + 0.1 + 10.0 * u(rng);
        SpectralDensity m = SpectralDensity::flat(u(rng), lo, hi);
        if (i % 3 == 1) m = SpectralDensity::power_law(u(rng), 4.0 * u(rng), std::max(lo, 0.0), hi + 5.0);
        if (i % 3 == 2) m = SpectralDensity::tabulated({lo, lo + 0.3, hi}, {u(rng), u(rng), u(rng)});
        const double e0 = lo - 1.0 + (hi - lo + 2.0) * u(rng);
        const auto g = perturbed_gamma(m, DissipationKernel::dirac(), e0);
        CHECK(g.gamma == golden_rule_gamma(m, e0).gamma);
        CHECK(g.gamma == g.gamma0);
    }
}

TEST_CASE("flat density with Lorentzian matches the arctan antiderivative") {
    const auto m = SpectralDensity::flat(1.0 / (2 * pi), 0.0, 20.0);
    const auto g = perturbed_gamma(m, DissipationKernel::lorentzian(1.0, 0.0), 10.0);
    CHECK(g.gamma == doctest::Approx(0.936548965138893).epsilon(1e-10));
    CHECK(g.method == Method::Quadrature);
    REQUIRE(g.quadrature_error_estimate);
    CHECK(*g.quadrature_error_estimate < 1e-8);
}

TEST_CASE("arctan oracle across widths and shifts") {
    const double c = 0.3, a = -1.0, b = 3.0, e0 = 1.0;
    const auto m = SpectralDensity::flat(c, a, b);
    for (double lr : {0.1, 1.0, 10.0}) {
        for (double li : {-2.0, 0.0, 2.0}) {
            const double expect = arctan_oracle(c, a, b, lr, e0 + li);
            CHECK(unstable_gamma(m, lr, li, e0).gamma == doctest::Approx(expect).epsilon(1e-8));
        }
    }
}

TEST_CASE("semi-infinite flat density adds the analytic tail") {
    const auto m = SpectralDensity::flat_semi_infinite(1.0 / (2 * pi), 0.0, 1e4);
    const double oracle = (std::atan(10.0) + pi / 2) / pi;
    CHECK(oracle == doctest::Approx(0.9682744825694465).epsilon(1e-15));
    CHECK(unstable_gamma(m, 1.0, 0.0, 10.0).gamma == doctest::Approx(oracle).epsilon(1e-8));
    // Only the centre omega_f + lambda_i matters.
    CHECK(unstable_gamma(m, 1.0, 3.0, 7.0).gamma == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("near-Dirac Lorentzian recovers the golden rule") {
    const auto m = SpectralDensity::flat(1.0 / (2 * pi), 0.0, 20.0);
    CHECK(std::abs(unstable_gamma(m, 1e-6, 0.0, 10.0).gamma - 1.0) < 1e-5);
    const auto cubic = SpectralDensity::power_law(1.0, 3.0, 0.0, 2.0);
    CHECK(unstable_gamma(cubic, 1e-7, 0.0, 1.0).gamma == doctest::Approx(2 * pi).epsilon(1e-5));
}

TEST_CASE("power law with Lorentzian matches brute-force Simpson") {
    const auto m = SpectralDensity::power_law(0.7, 3.0, 0.0, 2.0);
    for (double w : {0.05, 0.5, 3.0}) {
        const auto f = [&](double x) { return 2 * pi * 0.7 * x * x * x * w / (pi * (w * w + (x - 1.2) * (x - 1.2))); };
        const double ref = simpson(f, 0.0, 2.0, 200000);
        CHECK(perturbed_gamma(m, DissipationKernel::lorentzian(w, 0.0), 1.2).gamma == doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("Rabi double-delta kernel") {
    const auto cubic = SpectralDensity::power_law(1.0, 3.0, 0.0, 2.0);
    const auto g = perturbed_gamma(cubic, DissipationKernel::double_delta(0.4), 1.0);
    CHECK(g.gamma == doctest::Approx(2.24 * pi).epsilon(1e-14));
    CHECK(rabi_gamma(cubic, 0.4, 1.0).gamma == doctest::Approx(pi * (0.512 + 1.728)).epsilon(1e-14));
    CHECK(*g.ratio == doctest::Approx(1.12).epsilon(1e-14));
    // Both sidebands outside the support freeze the decay.
    CHECK(rabi_gamma(cubic, 3.0, 1.0).gamma == 0.0);
    const auto flat = SpectralDensity::flat(0.25, 0.0, 4.0);
    for (double w : {0.1, 1.0, 3.0}) CHECK(rabi_gamma(flat, w, 2.0).gamma == doctest::Approx(2 * pi * 0.25));
}

TEST_CASE("enhancement ratio") {
    CHECK(rabi_enhancement_ratio(0.2, 1.0).value == doctest::Approx(1.03).epsilon(1e-15));
    CHECK(rabi_enhancement_ratio(0.0, 1.0).value == 1.0);
    CHECK_FALSE(rabi_enhancement_ratio(0.4, 1.0).degraded);
    CHECK(rabi_enhancement_ratio(0.6, 1.0).degraded);
    CHECK_THROWS_AS(rabi_enhancement_ratio(1.0, 1.0), Error);
    CHECK_THROWS_AS(rabi_enhancement_ratio(-0.1, 1.0), Error);
    const auto cubic = SpectralDensity::power_law(1.0, 3.0, 0.0, 2.0);
    for (double w : {0.05, 0.1, 0.2, 0.4, 0.8}) {
        const double direct = rabi_gamma(cubic, w, 1.0).gamma / golden_rule_gamma(cubic, 1.0).gamma;
        CHECK(direct >= rabi_enhancement_ratio(w, 1.0).value - 1e-12);
        CHECK(direct == doctest::Approx(rabi_enhancement_ratio(w, 1.0).value).epsilon(1e-13));
    }
}

TEST_CASE("Zeno freezing for a flat band") {
    const double wm = 2.0;
    const auto m = SpectralDensity::flat(1.0 / (2 * pi), 0.0, wm);
    const double g0 = golden_rule_gamma(m, 1.0).gamma;
    double previous = g0;
    for (int k = 0; k <= 40; ++k) {
        const double lr = wm * std::pow(10.0, 0.1 * k);
        const double g = unstable_gamma(m, lr, 0.0, 1.0).gamma;
        CHECK(g < previous);
        previous = g;
    }
    CHECK(unstable_gamma(m, 10 * wm, 0.0, 1.0).gamma < 0.2 * g0);
}

TEST_CASE("kernel mass bounds every rate") {
    const auto m = SpectralDensity::tabulated({0.0, 0.5, 1.0, 2.0}, {0.0, 3.0, 1.0, 0.5});
    for (double lr : {0.001, 0.1, 1.0, 30.0}) {
        for (double e0 : {-1.0, 0.5, 1.7, 4.0}) {
            const auto g = perturbed_gamma(m, DissipationKernel::lorentzian(lr, 0.3), e0);
            CHECK(g.gamma <= 2 * pi * m.sup() + 1e-12);
            CHECK(g.gamma >= 0.0);
        }
    }
}

TEST_CASE("numeric kernel convolution approaches the Lorentzian rate") {
    const double lam = 0.2;
    const auto trace = spectral::DissipationTrace::sample([&](double t) { return std::complex<double>(std::exp(-lam * t)); },
                                                          200.0 / lam, 40001);
    const auto k = spectral::kernel_from_dissipation(trace);
    const auto m = SpectralDensity::flat(0.1, 0.0, 2.0);
    const double expect = arctan_oracle(0.1, 0.0, 2.0, lam, 1.0);
    CHECK(perturbed_gamma(m, k, 1.0).gamma == doctest::Approx(expect).epsilon(2e-3));
}

TEST_CASE("quadrature failure carries the estimate") {
    const auto m = SpectralDensity::power_law(1.0, 3.0, 0.0, 2.0);
    QuadratureSettings q;
    q.rel_tol = 1e-15;
    q.max_intervals = 2;
    try {
        perturbed_gamma(m, DissipationKernel::lorentzian(0.5, 0.0), 1.0, q);
        FAIL("expected QuadratureError");
    } catch (const QuadratureError& e) {
        CHECK(e.kind() == ErrorKind::QuadratureNonConvergence);
        CHECK(std::isfinite(e.estimate()));
    }
}

TEST_CASE("method names") {
    CHECK(to_string(Method::ClosedForm) == "closed_form");
    CHECK(to_string(Method::Quadrature) == "quadrature");
    CHECK(to_string(Method::DynamicFit) == "dynamic_fit");
    CHECK(to_string(ErrorKind::QuadratureNonConvergence) == "quadrature_nonconvergence");
}
