// rates.hpp - Decay constants by the analytic route: Fermi's Golden Rule, the
// kernel-convolved Golden Rule Gamma = 2 pi int M(w) Delta(w - E0) dw, and its
// closed forms for Lorentzian and Rabi (double-delta) kernels.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zeno/spectral.hpp"

namespace zeno::rates {

enum class Method { ClosedForm, Quadrature, DynamicFit };

std::string to_string(Method m);

struct DecayRateResult {
    double gamma{0.0};
    double gamma0{0.0};
    std::optional<double> ratio;                       // gamma / gamma0 when gamma0 > 0
    Method method{Method::ClosedForm};
    std::optional<double> quadrature_error_estimate;   // absent for closed forms
    std::vector<std::string> warnings;

    static DecayRateResult make(double gamma, double gamma0, Method method);
};

struct QuadratureSettings {
    double rel_tol{1e-8};
    std::size_t max_intervals{5000};
    // Below this fraction of the support width the Lorentzian is integrated in
    // u = atan((w - center) / width).
    double narrow_fraction{1e-3};
};

DecayRateResult golden_rule_gamma(const spectral::SpectralDensity& m, double e0);

DecayRateResult perturbed_gamma(const spectral::SpectralDensity& m,
                                const spectral::DissipationKernel& kernel, double e0,
                                const QuadratureSettings& q = {});

// Lorentzian of width lambda_r centred at omega_f + lambda_i.
DecayRateResult unstable_gamma(const spectral::SpectralDensity& m, double lambda_r,
                               double lambda_i, double omega_f,
                               const QuadratureSettings& q = {});

// pi * [M(omega_f - W/2) + M(omega_f + W/2)]
DecayRateResult rabi_gamma(const spectral::SpectralDensity& m, double rabi_frequency,
                           double omega_f);

struct EnhancementRatio {
    double value{1.0};
    bool degraded{false};   // W > 0.5 omega_01, where the small-W expansion is loose
};

// 1 + (3/4) (W/omega_01)^2. Exact ratio rabi_gamma/golden_rule_gamma for
// M = a w^3 with both sidebands inside the support, since
// ((1-x)^3 + (1+x)^3)/2 = 1 + 3x^2 with x = W/(2 omega_01).
EnhancementRatio rabi_enhancement_ratio(double rabi_frequency, double omega_01);

} // namespace zeno::rates
