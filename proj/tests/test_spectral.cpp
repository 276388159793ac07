// test_spectral.cpp - densities, kernels and the Fourier route from D(tau).

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "zeno/errors.hpp"
#include "zeno/spectral.hpp"

using namespace zeno;
using namespace zeno::spectral;

namespace {

constexpr double pi = std::numbers::pi;

// Independent Lorentzian line shape.
double lorentz(double width, double shift, double e) {
    return width / (pi * (width * width + (e - shift) * (e - shift)));
}

DissipationKernel from_d(std::complex<double> (*d)(double, double), double p, double horizon, std::size_t n) {
    return kernel_from_dissipation(DissipationTrace::sample([&](double t) { return d(t, p); }, horizon, n));
}

std::complex<double> exp_decay(double t, double lam) { return {std::exp(-lam * t), 0.0}; }
std::complex<double> constant(double, double) { return {1.0, 0.0}; }
std::complex<double> rabi(double t, double half) { return {std::cos(half * t), 0.0}; }

const NumericKernel& numeric(const DissipationKernel& k) { return std::get<NumericKernel>(k.variant()); }

// Trapezoid mass of the grid values with eps in [a, b].
double grid_mass(const NumericKernel& k, double a, double b) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < k.values.size(); ++i) {
        const double e0 = k.eps(i), e1 = k.eps(i + 1);
        if (e0 >= a && e1 <= b) s += 0.5 * k.step * (k.values[i] + k.values[i + 1]);
    }
    return s;
}

} // namespace

TEST_CASE("flat and power-law densities") {
    const auto flat = SpectralDensity::flat(0.5, 0.0, 10.0);
    CHECK(flat(3.0) == 0.5);
    CHECK(flat(11.0) == 0.0);
    CHECK(flat.width() == 10.0);
    const auto cubic = SpectralDensity::power_law(1.0, 3.0, 0.0, 2.0);
    CHECK(cubic(1.1) == doctest::Approx(1.331).epsilon(1e-14));
    CHECK(cubic(2.5) == 0.0);
    CHECK(cubic.sup() == doctest::Approx(8.0));
    CHECK(eval_spectral_density(cubic, 0.5) == doctest::Approx(0.125));
}

TEST_CASE("tabulated density interpolates linearly and reports its kinks") {
    const auto tab = SpectralDensity::tabulated({0.0, 1.0, 3.0}, {0.0, 2.0, 0.0});
    CHECK(tab(0.5) == doctest::Approx(1.0));
    CHECK(tab(2.0) == doctest::Approx(1.0));
    CHECK(tab(-0.1) == 0.0);
    CHECK(tab(3.1) == 0.0);
    CHECK(tab.kinks() == std::vector<double>{1.0});
    CHECK(tab.sup() == 2.0);
}

TEST_CASE("density construction rejects bad input") {
    CHECK_THROWS_AS(SpectralDensity::flat(-1.0, 0.0, 1.0), Error);
    CHECK_THROWS_AS(SpectralDensity::flat(1.0, 2.0, 1.0), Error);
    CHECK_THROWS_AS(SpectralDensity::power_law(1.0, 3.0, -1.0, 1.0), Error);
    CHECK_THROWS_AS(SpectralDensity::tabulated({0.0, 0.0}, {1.0, 1.0}), Error);
    CHECK_THROWS_AS(SpectralDensity::tabulated({0.0, 1.0}, {1.0}), Error);
    CHECK_THROWS_AS(SpectralDensity::tabulated({0.0, 1.0}, {1.0, -1.0}), Error);
}

TEST_CASE("Lorentzian kernel values") {
    CHECK(eval_kernel(DissipationKernel::lorentzian(0.5, 0.0), 0.0) == doctest::Approx(1.0 / (0.5 * pi)));
    CHECK(eval_kernel(DissipationKernel::lorentzian(1.0, 2.0), 2.0) == doctest::Approx(1.0 / pi));
    CHECK(eval_kernel(DissipationKernel::lorentzian(1.0, 0.0), 1.0) == doctest::Approx(1.0 / (2.0 * pi)));
}

TEST_CASE("doubling the width halves the Lorentzian peak") {
    for (double w : {0.01, 0.3, 1.0, 7.0}) {
        const double p1 = eval_kernel(DissipationKernel::lorentzian(w, 0.0), 0.0);
        const double p2 = eval_kernel(DissipationKernel::lorentzian(2.0 * w, 0.0), 0.0);
        CHECK(p2 == doctest::Approx(0.5 * p1).epsilon(1e-15));
        CHECK(p1 == doctest::Approx(1.0 / (pi * w)).epsilon(1e-15));
    }
}

TEST_CASE("Lorentzian with zero shift is even") {
    const auto k = DissipationKernel::lorentzian(0.7, 0.0);
    for (double e : {0.1, 0.5, 2.0, 13.0}) CHECK(eval_kernel(k, e) == eval_kernel(k, -e));
}

TEST_CASE("distributional kernels refuse pointwise queries") {
    CHECK_THROWS_AS(eval_kernel(DissipationKernel::dirac(), 0.0), Error);
    CHECK_THROWS_AS(eval_kernel(DissipationKernel::double_delta(0.4), 0.2), Error);
    try {
        eval_kernel(DissipationKernel::dirac(), 0.0);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DistributionalKernel);
    }
    CHECK_THROWS_AS(DissipationKernel::lorentzian(0.0, 0.0), Error);
    CHECK_THROWS_AS(DissipationKernel::double_delta(-1.0), Error);
}

TEST_CASE("analytic kernels have zero normalization defect") {
    CHECK(kernel_normalization_defect(DissipationKernel::dirac()) == 0.0);
    CHECK(kernel_normalization_defect(DissipationKernel::lorentzian(3.0, -1.0)) == 0.0);
    CHECK(kernel_normalization_defect(DissipationKernel::double_delta(0.4)) == 0.0);
}

TEST_CASE("kernel of an exponential D matches the Lorentzian") {
    const auto k = from_d(exp_decay, 0.5, 200.0, 4001);
    const auto& nk = numeric(k);
    CHECK(nk.step == doctest::Approx(pi / 200.0));
    double worst = 0.0;
    for (double e = -5.0; e <= 5.0; e += 0.01) worst = std::max(worst, std::abs(eval_kernel(k, e) - lorentz(0.5, 0.0, e)));
    CHECK(worst < 1e-3);
    CHECK(kernel_normalization_defect(k) < 1e-3);
}

TEST_CASE("kernel of e^{-tau} on T = 100 is normalized") {
    const auto k = from_d(exp_decay, 1.0, 100.0, 10001);
    CHECK(kernel_normalization_defect(k) <= 1e-3);
    // Compare with the analytic Lorentzian mass on the same finite grid.
    const auto& nk = numeric(k);
    const double lorentz_mass = (std::atan(nk.eps_max()) - std::atan(nk.eps_min)) / pi;
    CHECK(std::abs(nk.mass() - lorentz_mass) < 1e-3);
}

TEST_CASE("kernel of a constant D is a narrow unit peak") {
    const double horizon = 100.0;
    const auto k = from_d(constant, 0.0, horizon, 2001);
    const auto& nk = numeric(k);
    CHECK(std::abs(nk.mass() - 1.0) <= 1e-3);
    const double peak = nk(0.0);
    double half_width = 0.0;
    for (std::size_t i = 0; i < nk.values.size(); ++i) {
        if (nk.values[i] >= 0.5 * peak) half_width = std::max(half_width, std::abs(nk.eps(i)));
    }
    CHECK(half_width <= 2.0 * pi / horizon);
}

TEST_CASE("kernel of cos(W tau / 2) splits into two equal peaks") {
    const auto k = from_d(rabi, 0.4, 500.0, 5001);
    const auto& nk = numeric(k);
    CHECK(grid_mass(nk, 0.0, nk.eps_max()) == doctest::Approx(0.5).epsilon(0.04));
    CHECK(grid_mass(nk, nk.eps_min, 0.0) == doctest::Approx(0.5).epsilon(0.04));
    std::size_t arg = 0;
    for (std::size_t i = 0; i < nk.values.size(); ++i) {
        if (nk.eps(i) > 0.0 && nk.values[i] > nk.values[arg]) arg = i;
    }
    CHECK(std::abs(nk.eps(arg) - 0.4) <= nk.step);
    CHECK(kernel_normalization_defect(k) < 1e-3);
}

TEST_CASE("kernel of a real D is even on its symmetric grid") {
    for (auto [d, p] : {std::pair{exp_decay, 0.3}, std::pair{rabi, 0.25}}) {
        const auto& nk = numeric(from_d(d, p, 150.0, 3001));
        const std::size_t n = nk.values.size();
        CHECK(nk.eps_min == doctest::Approx(-nk.eps_max()));
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(nk.values[i] - nk.values[n - 1 - i]) < 1e-9);
    }
}

TEST_CASE("Fourier route converges as the window grows") {
    // D = exp(-(lr - i li) tau) centres the line at eps = li.
    const double lr = 0.5, li = 1.0;
    double previous = 1e9;
    for (double horizon : {50.0, 100.0, 200.0}) {
        const auto trace = DissipationTrace::sample(
            [&](double t) { return std::exp(std::complex<double>(-lr * t, li * t)); }, horizon,
            static_cast<std::size_t>(horizon * 20) + 1);
        const auto k = kernel_from_dissipation(trace);
        double worst = 0.0;
        for (double e = li - 5 * lr; e <= li + 5 * lr; e += 0.005) {
            worst = std::max(worst, std::abs(eval_kernel(k, e) - lorentz(lr, li, e)));
        }
        CHECK(worst < previous);
        previous = worst;
    }
    CHECK(previous < 1e-3);
}

TEST_CASE("numeric kernel is zero outside its grid") {
    const auto k = from_d(exp_decay, 1.0, 50.0, 1001);
    const auto& nk = numeric(k);
    CHECK(eval_kernel(k, nk.eps_max() + 1.0) == 0.0);
    CHECK(eval_kernel(k, nk.eps_min - 1.0) == 0.0);
}

TEST_CASE("Fourier route rejects degenerate or irregular traces") {
    auto kind_of = [](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::IoError;
    };
    CHECK(kind_of([] { from_d(exp_decay, 1.0, 10.0, 63); }) == ErrorKind::DegenerateTrace);

    auto tr = DissipationTrace::sample([](double t) { return exp_decay(t, 1.0); }, 50.0, 201);
    tr.times[100] += 0.01;
    CHECK(kind_of([&] { kernel_from_dissipation(tr); }) == ErrorKind::NonUniformGrid);

    auto shifted = DissipationTrace::sample([](double t) { return exp_decay(t, 1.0); }, 50.0, 201);
    for (auto& t : shifted.times) t += 1.0;
    CHECK(kind_of([&] { kernel_from_dissipation(shifted); }) == ErrorKind::NonUniformGrid);

    // Eight oscillations at eps_max need T * eps_max / (2 pi) >= 8.
    const auto short_trace = DissipationTrace::sample([](double t) { return exp_decay(t, 1.0); }, 10.0, 101);
    CHECK(kind_of([&] { kernel_from_dissipation(short_trace, {.eps_max = 1.0}); }) == ErrorKind::DegenerateTrace);
}
