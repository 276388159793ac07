// dynamics.hpp - Time-domain route: finite Hamiltonians H = H0 + V + W(t) on a
// discretized continuum, Schroedinger propagation, the no-decay amplitude
// F(t) = <Psi0|Psi(t)> exp(i E0 t), the dissipation function D(tau) and
// log-linear decay fits.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zeno/rates.hpp"
#include "zeno/spectral.hpp"

namespace zeno::dynamics {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

enum class Sector : std::uint8_t { Initial, Xi, Eta };

// <row|W|col> = value; the Hermitian partner is implied.
struct Coupling {
    std::size_t row{0};
    std::size_t col{0};
    cplx value{0.0};
};

// W_drive(t) = cos(frequency * t) * (amplitude + amplitude^dagger)
struct Drive {
    std::vector<Coupling> amplitude;
    double frequency{0.0};
};

struct ModelData {
    std::vector<double> energies;                       // H0 diagonal; index 0 is |Psi0>
    std::vector<Sector> sectors;
    std::vector<std::pair<std::size_t, cplx>> v;        // (xi index, <xi|V|Psi0>)
    std::vector<Coupling> w_static;
    std::optional<Drive> drive;
    std::optional<double> recurrence_time;              // 2 pi / coarsest level spacing
    std::optional<double> xi_span;                      // energy span of the xi sector
};

struct ModelLimits {
    std::size_t dimension_cap{50000};
};

class DiscretizedModel {
public:
    explicit DiscretizedModel(ModelData data, const ModelLimits& limits = {});

    std::size_t dimension() const noexcept { return energies_.size(); }
    double initial_energy() const noexcept { return energies_[0]; }
    const std::vector<double>& energies() const noexcept { return energies_; }
    const std::vector<Sector>& sectors() const noexcept { return sectors_; }
    const std::vector<std::pair<std::size_t, cplx>>& v_couplings() const noexcept { return v_; }
    const SparseMatrix& w_static() const noexcept { return w_; }
    const SparseMatrix& drive_amplitude() const noexcept { return drive_; }
    bool time_dependent() const noexcept { return drive_frequency_.has_value(); }
    std::optional<double> drive_frequency() const noexcept { return drive_frequency_; }
    std::optional<double> recurrence_time() const noexcept { return recurrence_time_; }
    std::optional<double> xi_span() const noexcept { return xi_span_; }

    // Midpoint of the H0 spectrum; propagation runs with H - reference * I.
    double reference_energy() const noexcept { return reference_; }

    // Upper bound on the spectral radius of H - reference, or the drive
    // frequency if larger.
    double energy_scale() const noexcept { return scale_; }

    // y = (H(t) - reference) x, with or without V.
    void apply(double t, const Vector& x, Vector& y, bool include_v) const;

    Eigen::MatrixXcd dense_hamiltonian(bool include_v) const;

    // V|Psi0> as a full-length vector.
    Vector v_state() const;

private:
    std::vector<double> energies_;
    std::vector<Sector> sectors_;
    std::vector<std::pair<std::size_t, cplx>> v_;
    Eigen::ArrayXd shifted_;   // H0 diagonal minus reference
    Vector v_full_;            // V|Psi0> over the full basis
    SparseMatrix w_;
    SparseMatrix drive_;
    std::optional<double> drive_frequency_;
    std::optional<double> recurrence_time_;
    std::optional<double> xi_span_;
    double reference_{0.0};
    double scale_{0.0};
};

// ------------------------------ Continuum discretization ---------------------

struct ContinuumGrid {
    std::vector<double> omega;      // cell midpoints
    std::vector<double> coupling;   // sqrt(M(omega_k) * spacing)
    double spacing{0.0};
};

ContinuumGrid discretize(const spectral::SpectralDensity& m, std::size_t count);

// |Psi0> at energy e0 coupled to `count` levels sampling M (Wigner-Weisskopf model).
DiscretizedModel continuum_model(const spectral::SpectralDensity& m, double e0, std::size_t count);

// ------------------------------ Propagation ----------------------------------

struct PropagationOptions {
    double horizon{0.0};            // signed duration; negative runs backwards (static models only)
    double dt{0.0};                 // 0 selects 0.02 / energy_scale
    std::size_t samples{1001};      // output points including the start
    double t0{0.0};
    bool include_v{true};
    std::size_t dense_threshold{2000};
    double drift_limit{1e-6};
};

struct PropagationStats {
    double dt{0.0};
    std::size_t steps{0};
    double max_norm_drift{0.0};
    bool eigendecomposition{false};
};

using Observer = std::function<void(double t, const Vector& state)>;

double default_dt(const DiscretizedModel& model);

// Core driver: evolves `initial` and reports every sample to `observe`.
PropagationStats propagate(const DiscretizedModel& model, const Vector& initial,
                           const PropagationOptions& opts, const Observer& observe);

struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    PropagationStats stats;
    std::optional<double> recurrence_time;
    std::optional<double> xi_span;
};

// Starts from basis vector 0 and keeps every sampled state.
Trajectory propagate(const DiscretizedModel& model, double horizon, double dt = 0.0,
                     std::size_t samples = 1001);

// ------------------------------ Amplitudes and fits --------------------------

struct AmplitudeTrace {
    std::vector<double> times;
    std::vector<cplx> values;
    std::optional<double> recurrence_time;
    std::optional<double> xi_span;
    PropagationStats stats;
};

AmplitudeTrace no_decay_amplitude(const Trajectory& trajectory, double e0);

// Propagates from |Psi0> keeping only component 0.
AmplitudeTrace amplitude_trace(const DiscretizedModel& model, const PropagationOptions& opts);

struct FitWindow {
    double start{0.0};
    double end{0.0};
};

// [10 / xi_span, min(0.4 T_rec, 3 / gamma_expected)]
FitWindow default_fit_window(const DiscretizedModel& model, double gamma_expected);

struct FitDiagnostics {
    cplx gamma{0.0};          // F ~ exp(-gamma t); decay constant is 2 Re gamma
    FitWindow window;
    double residual_rms{0.0};
    std::optional<double> recurrence_time;
    std::size_t points{0};
};

std::pair<rates::DecayRateResult, FitDiagnostics>
fit_decay(const AmplitudeTrace& trace, const FitWindow& window,
          std::optional<double> gamma0 = std::nullopt);

// ------------------------------ Dissipation function -------------------------

struct DissipationOptions {
    double horizon{0.0};
    double dt{0.0};
    std::size_t samples{1001};
    double t1{0.0};
    // Driven models: D is recomputed from t1 + a quarter drive period and must
    // agree to this sup-norm. The counter-rotating drive term alone produces a
    // t1 dependence of about W / omega_drive.
    double stationarity_tolerance{0.05};
    std::size_t dense_threshold{2000};
};

spectral::DissipationTrace dissipation_trace(const DiscretizedModel& model,
                                             const DissipationOptions& opts,
                                             std::string label = {});

struct DissipationFit {
    cplx lambda{0.0};         // D ~ exp(-lambda tau), lambda = lambda_r - i lambda_i
    double r_squared{0.0};    // of the ln|D| line
    double residual_rms{0.0};
};

DissipationFit fit_dissipation(const spectral::DissipationTrace& trace, const FitWindow& window);

} // namespace zeno::dynamics
