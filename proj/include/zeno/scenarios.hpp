// scenarios.hpp - The three final-state dissipation mechanisms (detector
// scattering, decay onto an unstable level, Rabi drive of the final level),
// each buildable as a discretized model and as analytic-route inputs.
//
// Energy reference: omega^X_1 = omega^Y_0 = omega^Z_0 = 0, so the initial
// energy E0 equals omega_f and xi-states sit at the emitted Y energy.

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "zeno/dynamics.hpp"
#include "zeno/rates.hpp"
#include "zeno/spectral.hpp"

namespace zeno::scenarios {

// Semiclassical drive W_X(t) = W (|x1><x2| + h.c.) cos(omega_21 t).
struct RabiDrive {
    double rabi_frequency{0.0};
    double omega_21{0.0};
};

// |x1> decays to |x2> emitting Z. lambda_r defaults to the amplitude decay
// constant pi * M_Z(omega_12), half of the Golden-Rule probability rate.
struct UnstableLevel {
    std::optional<spectral::SpectralDensity> m_z;
    double omega_12{0.0};
    std::optional<double> lambda_r;
    double lambda_i{0.0};
    // Half-width of the flat Z band synthesized when only lambda_r is given (0: 25 lambda_r).
    double z_half_width{0.0};
};

// Emitted particle scattered by a detector. Either an exponential D_s with
// amplitude rate R, or an explicit per-mode continuum over the energy
// mismatch nu of the scattered state (resonant at nu = 0).
struct Scattering {
    std::optional<double> rate;
    std::optional<spectral::SpectralDensity> m_s;
    double band_half_width{0.0};   // synthesized band for rate-only models (0: 25 R)
};

using Mechanism = std::variant<RabiDrive, UnstableLevel, Scattering>;

struct ScenarioSpec {
    spectral::SpectralDensity m_y;
    double omega_f{0.0};
    Mechanism mechanism;

    // Throws zeno::Error(InvalidArgument) on violated invariants.
    void validate() const;
    std::vector<std::string> warnings() const;
    double initial_energy() const noexcept { return omega_f; }
    std::string kind() const;
};

struct AnalyticInputs {
    spectral::SpectralDensity m;
    spectral::DissipationKernel kernel;
    double e0{0.0};
};

AnalyticInputs build_analytic(const ScenarioSpec& spec);

rates::DecayRateResult analytic_gamma(const ScenarioSpec& spec, const rates::QuadratureSettings& q = {});

// D(tau) implied by the analytic kernel (cos, exponential or 1).
std::complex<double> analytic_dissipation(const ScenarioSpec& spec, double tau);

dynamics::DiscretizedModel build_dynamic(const ScenarioSpec& spec, std::size_t n_y, std::size_t n_z,
                                         const dynamics::ModelLimits& limits = {});

} // namespace zeno::scenarios
