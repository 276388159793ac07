#include "zeno/dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "zeno/errors.hpp"

namespace zeno::dynamics {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

bool in_final_sectors(const std::vector<Sector>& s, std::size_t i) {
    return i < s.size() && (s[i] == Sector::Xi || s[i] == Sector::Eta);
}

// Builds a Hermitian sparse matrix from one-sided couplings.
SparseMatrix hermitian_from(const std::vector<Coupling>& entries, std::size_t n,
                            const std::vector<Sector>& sectors, const char* what) {
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(2 * entries.size());
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& c : entries) {
        require(c.row < n && c.col < n, std::string(what) + ": index out of range");
        // W|Psi0> = 0 and <Psi0|W = 0.
        require(c.row != 0 && c.col != 0, std::string(what) + " must not touch the initial state");
        require(in_final_sectors(sectors, c.row) && in_final_sectors(sectors, c.col),
                std::string(what) + " must act inside the xi and eta sectors");
        require(std::isfinite(c.value.real()) && std::isfinite(c.value.imag()),
                std::string(what) + ": non-finite coupling");
        const auto key = std::minmax(c.row, c.col);
        require(seen.insert(key).second, std::string(what) + ": duplicate coupling entry");
        if (c.row == c.col) {
            require(std::abs(c.value.imag()) <= 1e-12, std::string(what) + ": diagonal entry must be real");
            trip.emplace_back(static_cast<int>(c.row), static_cast<int>(c.col), cplx(c.value.real(), 0.0));
        } else {
            trip.emplace_back(static_cast<int>(c.row), static_cast<int>(c.col), c.value);
            trip.emplace_back(static_cast<int>(c.col), static_cast<int>(c.row), std::conj(c.value));
        }
    }
    SparseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.setFromTriplets(trip.begin(), trip.end());
    m.makeCompressed();
    return m;
}

double max_row_sum(const SparseMatrix& m) {
    double best = 0.0;
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
        double s = 0.0;
        for (SparseMatrix::InnerIterator it(m, r); it; ++it) s += std::abs(it.value());
        best = std::max(best, s);
    }
    return best;
}

struct LineFit {
    cplx slope{0.0};
    cplx intercept{0.0};
    double residual_rms{0.0};
    double r_squared{0.0};
    std::size_t points{0};
};

// Least-squares line through ln(values) on [start, end], phase unwrapped.
LineFit fit_log_line(const std::vector<double>& times, const std::vector<cplx>& values,
                     const FitWindow& w) {
    std::vector<double> t, re, im;
    double prev_phase = 0.0, offset = 0.0;
    bool first = true;
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (times[j] < w.start || times[j] > w.end) continue;
        const double mag = std::abs(values[j]);
        require(mag > 1e-6, "fit window reaches the noise floor (|F| <= 1e-6)");
        double ph = std::arg(values[j]);
        if (!first) {
            double d = ph + offset - prev_phase;
            while (d > std::numbers::pi) { offset -= two_pi; d -= two_pi; }
            while (d < -std::numbers::pi) { offset += two_pi; d += two_pi; }
        }
        ph += offset;
        prev_phase = ph;
        first = false;
        t.push_back(times[j]);
        re.push_back(std::log(mag));
        im.push_back(ph);
    }
    LineFit f;
    f.points = t.size();
    if (t.size() < 3) fail(ErrorKind::IllConditionedFit, "fewer than 3 samples inside the fit window");

    const double n = static_cast<double>(t.size());
    double st = 0, sr = 0, si = 0;
    for (std::size_t j = 0; j < t.size(); ++j) { st += t[j]; sr += re[j]; si += im[j]; }
    const double mt = st / n, mr = sr / n, mi = si / n;
    double stt = 0, str = 0, sti = 0, srr = 0;
    for (std::size_t j = 0; j < t.size(); ++j) {
        const double dt = t[j] - mt;
        stt += dt * dt;
        str += dt * (re[j] - mr);
        sti += dt * (im[j] - mi);
        srr += (re[j] - mr) * (re[j] - mr);
    }
    if (!(stt > 0.0)) fail(ErrorKind::IllConditionedFit, "degenerate fit window");
    const double br = str / stt, bi = sti / stt;
    f.slope = {br, bi};
    f.intercept = {mr - br * mt, mi - bi * mt};
    double ss = 0.0, ss_re = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j) {
        const double rr = re[j] - (f.intercept.real() + br * t[j]);
        const double ri = im[j] - (f.intercept.imag() + bi * t[j]);
        ss += rr * rr + ri * ri;
        ss_re += rr * rr;
    }
    f.residual_rms = std::sqrt(ss / n);
    f.r_squared = srr > 0.0 ? 1.0 - ss_re / srr : 1.0;
    return f;
}

} // namespace

// ------------------------------ DiscretizedModel -----------------------------

DiscretizedModel::DiscretizedModel(ModelData d, const ModelLimits& limits) {
    const std::size_t n = d.energies.size();
    require(n >= 1, "model needs at least the initial state");
    if (n > limits.dimension_cap) {
        fail(ErrorKind::DimensionOverBudget,
             "model dimension " + std::to_string(n) + " exceeds cap " + std::to_string(limits.dimension_cap));
    }
    require(d.sectors.size() == n, "sector labels must cover every basis state");
    require(d.sectors[0] == Sector::Initial, "index 0 must be the initial state");
    for (std::size_t i = 1; i < n; ++i) {
        require(d.sectors[i] != Sector::Initial, "only index 0 may be labelled initial");
    }
    for (double e : d.energies) require(std::isfinite(e), "H0 energies must be finite");

    std::set<std::size_t> v_seen;
    for (const auto& [idx, val] : d.v) {
        require(idx < n && d.sectors[idx] == Sector::Xi, "V may only connect |Psi0> to the xi sector");
        require(v_seen.insert(idx).second, "duplicate V coupling");
        require(std::isfinite(val.real()) && std::isfinite(val.imag()), "non-finite V coupling");
    }

    w_ = hermitian_from(d.w_static, n, d.sectors, "W");
    drive_ = SparseMatrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    if (d.drive) {
        require(std::isfinite(d.drive->frequency) && d.drive->frequency >= 0.0,
                "drive frequency must be finite and >= 0");
        drive_ = hermitian_from(d.drive->amplitude, n, d.sectors, "drive");
        drive_frequency_ = d.drive->frequency;
    }

    energies_ = std::move(d.energies);
    sectors_ = std::move(d.sectors);
    v_ = std::move(d.v);
    recurrence_time_ = d.recurrence_time;
    xi_span_ = d.xi_span;

    const auto [lo, hi] = std::minmax_element(energies_.begin(), energies_.end());
    reference_ = 0.5 * (*lo + *hi);
    double vnorm = 0.0;
    for (const auto& c : v_) vnorm += std::norm(c.second);
    scale_ = 0.5 * (*hi - *lo) + std::sqrt(vnorm) + max_row_sum(w_) + max_row_sum(drive_);
    if (drive_frequency_) scale_ = std::max(scale_, *drive_frequency_);
    if (!(scale_ > 0.0)) scale_ = 1.0;

    shifted_ = Eigen::Map<const Eigen::ArrayXd>(energies_.data(), static_cast<Eigen::Index>(n)) - reference_;
    v_full_ = Vector::Zero(static_cast<Eigen::Index>(n));
    for (const auto& [idx, val] : v_) v_full_[static_cast<Eigen::Index>(idx)] = val;
}

void DiscretizedModel::apply(double t, const Vector& x, Vector& y, bool include_v) const {
    y.array() = shifted_ * x.array();
    if (include_v && !v_.empty()) {
        const cplx acc = v_full_.dot(x);
        y.noalias() += x[0] * v_full_;
        y[0] += acc;
    }
    if (w_.nonZeros() > 0) y.noalias() += w_ * x;
    if (drive_frequency_ && drive_.nonZeros() > 0) {
        y.noalias() += std::cos(*drive_frequency_ * t) * (drive_ * x);
    }
}

Eigen::MatrixXcd DiscretizedModel::dense_hamiltonian(bool include_v) const {
    const auto n = static_cast<Eigen::Index>(energies_.size());
    Eigen::MatrixXcd h = Eigen::MatrixXcd(w_);
    for (Eigen::Index i = 0; i < n; ++i) h(i, i) += energies_[static_cast<std::size_t>(i)] - reference_;
    if (include_v) {
        for (const auto& [idx, val] : v_) {
            const auto k = static_cast<Eigen::Index>(idx);
            h(k, 0) += val;
            h(0, k) += std::conj(val);
        }
    }
    return h;
}

Vector DiscretizedModel::v_state() const { return v_full_; }

// ------------------------------ Continuum ------------------------------------

ContinuumGrid discretize(const spectral::SpectralDensity& m, std::size_t count) {
    require(count >= 1, "continuum needs at least one level");
    ContinuumGrid g;
    g.spacing = m.width() / static_cast<double>(count);
    g.omega.resize(count);
    g.coupling.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        g.omega[k] = m.lo() + (static_cast<double>(k) + 0.5) * g.spacing;
        g.coupling[k] = std::sqrt(m(g.omega[k]) * g.spacing);
    }
    return g;
}

DiscretizedModel continuum_model(const spectral::SpectralDensity& m, double e0, std::size_t count) {
    const auto g = discretize(m, count);
    ModelData d;
    d.energies.reserve(count + 1);
    d.energies.push_back(e0);
    d.sectors.assign(count + 1, Sector::Xi);
    d.sectors[0] = Sector::Initial;
    for (std::size_t k = 0; k < count; ++k) {
        d.energies.push_back(g.omega[k]);
        if (g.coupling[k] != 0.0) d.v.emplace_back(k + 1, g.coupling[k]);
    }
    d.recurrence_time = two_pi / g.spacing;
    d.xi_span = m.width();
    return DiscretizedModel(std::move(d));
}

// ------------------------------ Propagation ----------------------------------

double default_dt(const DiscretizedModel& model) { return 0.02 / model.energy_scale(); }

PropagationStats propagate(const DiscretizedModel& model, const Vector& initial,
                           const PropagationOptions& opts, const Observer& observe) {
    const auto n = static_cast<Eigen::Index>(model.dimension());
    require(initial.size() == n, "initial state has the wrong dimension");
    require(std::isfinite(opts.horizon) && opts.horizon != 0.0, "propagation horizon must be nonzero");
    require(opts.samples >= 2, "need at least two output samples");
    require(opts.horizon > 0.0 || !model.time_dependent(), "backward propagation needs a static model");

    const double limit = 0.05 / model.energy_scale();
    double dt = opts.dt == 0.0 ? default_dt(model) : std::abs(opts.dt);
    if (dt > limit * (1.0 + 1e-12)) {
        fail(ErrorKind::StepTooLarge, "dt exceeds 0.05 / energy scale of the model");
    }

    const double interval = opts.horizon / static_cast<double>(opts.samples - 1);
    const auto per_sample = static_cast<std::size_t>(std::ceil(std::abs(interval) / dt - 1e-9));
    const double h = interval / static_cast<double>(std::max<std::size_t>(per_sample, 1));

    PropagationStats stats;
    stats.dt = std::abs(h);
    const double norm0 = initial.norm();
    require(norm0 > 0.0, "initial state must be nonzero");
    const double ref = model.reference_energy();

    auto emit = [&](std::size_t j, const Vector& psi_shifted) {
        const double t = opts.t0 + interval * static_cast<double>(j);
        const double drift = std::abs(psi_shifted.norm() / norm0 - 1.0);
        stats.max_norm_drift = std::max(stats.max_norm_drift, drift);
        if (drift > opts.drift_limit) {
            fail(ErrorKind::StepTooLarge, "norm drift " + std::to_string(drift) + " exceeds limit");
        }
        if (j == 0) {
            observe(t, psi_shifted);
        } else {
            observe(t, psi_shifted * std::polar(1.0, -ref * (t - opts.t0)));
        }
    };

    if (!model.time_dependent() && model.dimension() <= opts.dense_threshold) {
        stats.eigendecomposition = true;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(model.dense_hamiltonian(opts.include_v));
        if (eig.info() != Eigen::Success) fail(ErrorKind::InvalidArgument, "eigendecomposition failed");
        const Eigen::MatrixXcd& q = eig.eigenvectors();
        const Eigen::VectorXd& e = eig.eigenvalues();
        const Vector c = q.adjoint() * initial;
        Vector phased(n);
        emit(0, initial);
        for (std::size_t j = 1; j < opts.samples; ++j) {
            const double tau = interval * static_cast<double>(j);
            for (Eigen::Index i = 0; i < n; ++i) phased[i] = c[i] * std::polar(1.0, -e[i] * tau);
            emit(j, q * phased);
        }
        return stats;
    }

    Vector psi = initial, k1(n), k2(n), k3(n), k4(n), tmp(n);
    // k_i hold H' x; the -i factor is folded into the stage coefficients.
    const cplx half = cplx(0.0, -0.5 * h);
    const cplx full = cplx(0.0, -h);
    const cplx sixth = cplx(0.0, -h / 6.0);
    auto rhs = [&](double t, const Vector& x, Vector& y) { model.apply(t, x, y, opts.include_v); };
    emit(0, psi);
    double t = opts.t0;
    for (std::size_t j = 1; j < opts.samples; ++j) {
        for (std::size_t s = 0; s < per_sample; ++s) {
            rhs(t, psi, k1);
            tmp.noalias() = psi + half * k1;
            rhs(t + 0.5 * h, tmp, k2);
            tmp.noalias() = psi + half * k2;
            rhs(t + 0.5 * h, tmp, k3);
            tmp.noalias() = psi + full * k3;
            rhs(t + h, tmp, k4);
            psi.noalias() += sixth * (k1 + 2.0 * (k2 + k3) + k4);
            ++stats.steps;
            t = opts.t0 + interval * static_cast<double>(j - 1) + h * static_cast<double>(s + 1);
        }
        t = opts.t0 + interval * static_cast<double>(j);
        emit(j, psi);
    }
    return stats;
}

Trajectory propagate(const DiscretizedModel& model, double horizon, double dt, std::size_t samples) {
    Trajectory tr;
    Vector init = Vector::Zero(static_cast<Eigen::Index>(model.dimension()));
    init[0] = 1.0;
    PropagationOptions o;
    o.horizon = horizon;
    o.dt = dt;
    o.samples = samples;
    tr.stats = propagate(model, init, o, [&](double t, const Vector& s) {
        tr.times.push_back(t);
        tr.states.push_back(s);
    });
    tr.recurrence_time = model.recurrence_time();
    tr.xi_span = model.xi_span();
    return tr;
}

AmplitudeTrace no_decay_amplitude(const Trajectory& trajectory, double e0) {
    AmplitudeTrace a;
    a.times = trajectory.times;
    a.values.resize(trajectory.states.size());
    for (std::size_t j = 0; j < trajectory.states.size(); ++j) {
        a.values[j] = j == 0 ? trajectory.states[j][0]
                             : trajectory.states[j][0] * std::polar(1.0, e0 * trajectory.times[j]);
    }
    a.recurrence_time = trajectory.recurrence_time;
    a.xi_span = trajectory.xi_span;
    a.stats = trajectory.stats;
    return a;
}

AmplitudeTrace amplitude_trace(const DiscretizedModel& model, const PropagationOptions& opts) {
    AmplitudeTrace a;
    Vector init = Vector::Zero(static_cast<Eigen::Index>(model.dimension()));
    init[0] = 1.0;
    const double e0 = model.initial_energy();
    bool first = true;
    a.stats = propagate(model, init, opts, [&](double t, const Vector& s) {
        a.times.push_back(t);
        a.values.push_back(first ? s[0] : s[0] * std::polar(1.0, e0 * t));
        first = false;
    });
    a.recurrence_time = model.recurrence_time();
    a.xi_span = model.xi_span();
    return a;
}

FitWindow default_fit_window(const DiscretizedModel& model, double gamma_expected) {
    require(model.xi_span() && model.recurrence_time(), "model lacks continuum metadata for a default window");
    FitWindow w;
    w.start = 10.0 / *model.xi_span();
    w.end = 0.4 * *model.recurrence_time();
    if (gamma_expected > 0.0) w.end = std::min(w.end, 3.0 / gamma_expected);
    return w;
}

std::pair<rates::DecayRateResult, FitDiagnostics>
fit_decay(const AmplitudeTrace& trace, const FitWindow& window, std::optional<double> gamma0) {
    require(!trace.times.empty(), "empty amplitude trace");
    require(window.start < window.end, "fit window needs start < end");
    require(window.start >= trace.times.front() - 1e-12 && window.end <= trace.times.back() + 1e-12,
            "fit window lies outside the trace");
    if (trace.recurrence_time && window.end >= 0.5 * *trace.recurrence_time) {
        fail(ErrorKind::WindowBeyondRecurrence, "fit window reaches half the recurrence time");
    }
    if (trace.xi_span) {
        require(window.start >= 5.0 / *trace.xi_span - 1e-12,
                "fit window starts inside the initial non-exponential transient");
    }
    const auto line = fit_log_line(trace.times, trace.values, window);
    FitDiagnostics diag;
    diag.gamma = -line.slope;
    diag.window = window;
    diag.residual_rms = line.residual_rms;
    diag.recurrence_time = trace.recurrence_time;
    diag.points = line.points;
    if (line.residual_rms > 0.1) {
        fail(ErrorKind::IllConditionedFit, "log-linear fit residual RMS above 0.1");
    }
    auto r = rates::DecayRateResult::make(2.0 * diag.gamma.real(), gamma0.value_or(0.0),
                                          rates::Method::DynamicFit);
    return {std::move(r), diag};
}

// ------------------------------ Dissipation function -------------------------

namespace {

std::vector<cplx> dissipation_values(const DiscretizedModel& model, const DissipationOptions& opts,
                                     double t1, std::size_t samples) {
    Vector phi = model.v_state();
    const double norm = phi.norm();
    if (!(norm > 0.0)) fail(ErrorKind::InvalidArgument, "dissipation function needs nonzero V couplings");
    phi /= norm;

    std::vector<cplx> numer;
    numer.reserve(samples);
    PropagationOptions p;
    p.horizon = opts.horizon;
    p.dt = opts.dt;
    p.samples = samples;
    p.t0 = t1;
    p.include_v = false;
    p.dense_threshold = opts.dense_threshold;
    propagate(model, phi, p, [&](double, const Vector& s) { numer.push_back(phi.dot(s)); });

    const auto& e = model.energies();
    const double interval = opts.horizon / static_cast<double>(samples - 1);
    std::vector<cplx> d(samples);
    Vector free(phi.size());
    for (std::size_t j = 0; j < samples; ++j) {
        const double tau = interval * static_cast<double>(j);
        if (j == 0) {
            free = phi;
        } else {
            for (Eigen::Index i = 0; i < phi.size(); ++i) {
                free[i] = phi[i] * std::polar(1.0, -e[static_cast<std::size_t>(i)] * tau);
            }
        }
        const cplx denom = phi.dot(free);
        if (std::abs(denom) < 1e-12) {
            fail(ErrorKind::VanishingDenominator, "free final-state overlap vanished at tau = " + std::to_string(tau));
        }
        d[j] = numer[j] / denom;
    }
    return d;
}

} // namespace

spectral::DissipationTrace dissipation_trace(const DiscretizedModel& model, const DissipationOptions& opts,
                                             std::string label) {
    require(opts.horizon > 0.0, "dissipation horizon must be > 0");
    require(opts.samples >= 2, "need at least two samples");
    const double step = opts.horizon / static_cast<double>(opts.samples - 1);

    if (!(model.time_dependent() && *model.drive_frequency() > 0.0)) {
        auto d = dissipation_values(model, opts, opts.t1, opts.samples);
        return spectral::DissipationTrace::uniform(step, std::move(d), std::move(label));
    }

    // Driven models: beyond the rotating-wave approximation D(t, t1) depends on
    // the drive phase at t1. Compare against a start a quarter drive period later.
    const double shift = 0.5 * std::numbers::pi / *model.drive_frequency();
    auto d = dissipation_values(model, opts, opts.t1, opts.samples);
    const auto other = dissipation_values(model, opts, opts.t1 + shift, opts.samples);
    double worst = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) worst = std::max(worst, std::abs(d[j] - other[j]));
    if (worst > opts.stationarity_tolerance) {
        fail(ErrorKind::NonstationaryDissipation,
             "D(t, t1) depends on t1 by " + std::to_string(worst) + " (sup norm)");
    }
    return spectral::DissipationTrace::uniform(step, std::move(d), std::move(label));
}

DissipationFit fit_dissipation(const spectral::DissipationTrace& trace, const FitWindow& window) {
    require(window.start < window.end, "fit window needs start < end");
    const auto line = fit_log_line(trace.times, trace.values, window);
    DissipationFit f;
    f.lambda = -line.slope;   // ln D = -lambda_r tau + i lambda_i tau
    f.r_squared = line.r_squared;
    f.residual_rms = line.residual_rms;
    return f;
}

} // namespace zeno::dynamics
