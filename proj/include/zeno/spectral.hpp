// spectral.hpp - Spectral densities M(w), dissipation kernels Delta(e) and the
// Fourier route from a sampled dissipation function D(tau) to its kernel.
//
// Units: hbar = 1, energies in one user-chosen unit, times in its inverse.

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace zeno::spectral {

using cplx = std::complex<double>;

// ------------------------------ Spectral densities ---------------------------

struct Flat {
    double level{0.0};
    double lo{0.0};
    double hi{0.0};
    // hi is a truncation cap of a density that stays at `level` up to infinity.
    // Pointwise evaluation still returns 0 above hi; rates adds the analytic tail.
    bool flat_tail{false};
};

struct PowerLaw {
    double amplitude{1.0};
    double exponent{3.0};   // 3 models electric-dipole emission
    double lo{0.0};
    double hi{1.0};
};

// Linear interpolation between nodes, zero outside the node range.
struct Tabulated {
    std::vector<double> omega;
    std::vector<double> value;
};

class SpectralDensity {
public:
    using Variant = std::variant<Flat, PowerLaw, Tabulated>;

    static SpectralDensity flat(double level, double lo, double hi);
    static SpectralDensity flat_semi_infinite(double level, double lo, double cap);
    static SpectralDensity power_law(double amplitude, double exponent, double lo, double hi);
    static SpectralDensity tabulated(std::vector<double> omega, std::vector<double> value);

    double operator()(double omega) const noexcept;

    double lo() const noexcept;
    double hi() const noexcept;
    double width() const noexcept { return hi() - lo(); }

    // Supremum of M over its support.
    double sup() const noexcept;

    // Interior points where M is not smooth (tabulated nodes).
    std::vector<double> kinks() const;

    // Level of the flat continuation above hi(), if this density was truncated.
    std::optional<double> tail_level() const noexcept;

    const Variant& variant() const noexcept { return v_; }

private:
    explicit SpectralDensity(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

inline double eval_spectral_density(const SpectralDensity& m, double omega) noexcept {
    return m(omega);
}

// ------------------------------ Dissipation kernels --------------------------

struct Dirac {};

// (1/pi) * width / (width^2 + (e - shift)^2); the kernel of D(tau) = exp(-(width - i shift) tau).
struct Lorentzian {
    double width{1.0};
    double shift{0.0};
};

// 0.5 * [delta(e - W/2) + delta(e + W/2)] for Rabi frequency W.
struct DoubleDelta {
    double rabi_frequency{1.0};
};

// Uniform epsilon grid, symmetric about 0, produced from a trace of length `window`.
struct NumericKernel {
    double eps_min{0.0};
    double step{0.0};
    std::vector<double> values;
    double window{0.0};
    double defect{0.0};   // |trapezoid mass - 1|

    double eps(std::size_t k) const noexcept { return eps_min + step * static_cast<double>(k); }
    double eps_max() const noexcept { return eps(values.empty() ? 0 : values.size() - 1); }
    double operator()(double e) const noexcept;
    double mass() const noexcept;
};

class DissipationKernel {
public:
    using Variant = std::variant<Dirac, Lorentzian, DoubleDelta, NumericKernel>;

    static DissipationKernel dirac() { return DissipationKernel(Dirac{}); }
    static DissipationKernel lorentzian(double width, double shift = 0.0);
    static DissipationKernel double_delta(double rabi_frequency);
    static DissipationKernel numeric(NumericKernel k);

    bool is_distributional() const noexcept {
        return std::holds_alternative<Dirac>(v_) || std::holds_alternative<DoubleDelta>(v_);
    }

    const Variant& variant() const noexcept { return v_; }
    std::string name() const;

private:
    explicit DissipationKernel(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

// Pointwise value; throws DistributionalKernel for Dirac and DoubleDelta.
double eval_kernel(const DissipationKernel& kernel, double eps);

double kernel_normalization_defect(const DissipationKernel& kernel) noexcept;

// ------------------------------ Dissipation traces ---------------------------

struct DissipationTrace {
    std::vector<double> times;
    std::vector<cplx> values;
    std::string label;

    static DissipationTrace uniform(double step, std::vector<cplx> values, std::string label = {});

    // Samples f on [0, horizon] with `count` points.
    template <class F>
    static DissipationTrace sample(F&& f, double horizon, std::size_t count, std::string label = {}) {
        std::vector<cplx> v(count);
        const double h = horizon / static_cast<double>(count - 1);
        for (std::size_t j = 0; j < count; ++j) v[j] = f(h * static_cast<double>(j));
        return uniform(h, std::move(v), std::move(label));
    }

    std::size_t size() const noexcept { return values.size(); }
    double horizon() const noexcept { return times.empty() ? 0.0 : times.back(); }
};

struct FourierOptions {
    // Largest |eps| on the output grid; default 8*pi/dtau.
    std::optional<double> eps_max;
    // Fraction of the trace covered by the half-cosine taper.
    double taper_fraction{0.1};
};

// Delta(e) = (1/pi) Re int_0^T w(tau) D(tau) exp(-i e tau) dtau, with D linearly
// interpolated between samples and w the end taper. Grid spacing is pi/T.
DissipationKernel kernel_from_dissipation(const DissipationTrace& trace,
                                          const FourierOptions& opts = {});

} // namespace zeno::spectral
