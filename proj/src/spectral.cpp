#include "zeno/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "zeno/errors.hpp"

namespace zeno::spectral {

namespace {

constexpr double pi = std::numbers::pi;

void check_support(double lo, double hi) {
    require(std::isfinite(lo) && std::isfinite(hi), "spectral density support must be finite");
    require(lo < hi, "spectral density support needs lo < hi");
}

} // namespace

// ------------------------------ SpectralDensity ------------------------------

SpectralDensity SpectralDensity::flat(double level, double lo, double hi) {
    check_support(lo, hi);
    require(std::isfinite(level) && level >= 0.0, "flat level must be finite and >= 0");
    return SpectralDensity(Flat{level, lo, hi, false});
}

SpectralDensity SpectralDensity::flat_semi_infinite(double level, double lo, double cap) {
    auto m = flat(level, lo, cap);
    std::get<Flat>(m.v_).flat_tail = true;
    return m;
}

SpectralDensity SpectralDensity::power_law(double amplitude, double exponent, double lo, double hi) {
    check_support(lo, hi);
    require(lo >= 0.0, "power-law support must start at omega >= 0");
    require(std::isfinite(amplitude) && amplitude >= 0.0, "power-law amplitude must be >= 0");
    require(std::isfinite(exponent), "power-law exponent must be finite");
    require(exponent >= 0.0 || lo > 0.0, "negative exponent needs lo > 0");
    return SpectralDensity(PowerLaw{amplitude, exponent, lo, hi});
}

SpectralDensity SpectralDensity::tabulated(std::vector<double> omega, std::vector<double> value) {
    require(omega.size() == value.size(), "tabulated density: grid and values differ in length");
    require(omega.size() >= 2, "tabulated density needs at least two nodes");
    for (std::size_t k = 0; k < omega.size(); ++k) {
        require(std::isfinite(omega[k]), "tabulated density: non-finite node");
        require(std::isfinite(value[k]) && value[k] >= 0.0,
                "tabulated density: values must be finite and >= 0");
        if (k > 0) require(omega[k] > omega[k - 1], "tabulated density: grid must be strictly increasing");
    }
    return SpectralDensity(Tabulated{std::move(omega), std::move(value)});
}

double SpectralDensity::operator()(double omega) const noexcept {
    return std::visit([omega](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Flat>) {
            return (omega >= m.lo && omega <= m.hi) ? m.level : 0.0;
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
            if (!(omega >= m.lo && omega <= m.hi)) return 0.0;
            return m.amplitude * std::pow(omega, m.exponent);
        } else {
            const auto& w = m.omega;
            if (!(omega >= w.front() && omega <= w.back())) return 0.0;
            auto it = std::upper_bound(w.begin(), w.end(), omega);
            if (it == w.end()) return m.value.back();
            const auto k = static_cast<std::size_t>(it - w.begin());
            const double t = (omega - w[k - 1]) / (w[k] - w[k - 1]);
            return (1.0 - t) * m.value[k - 1] + t * m.value[k];
        }
    }, v_);
}

double SpectralDensity::lo() const noexcept {
    return std::visit([](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Tabulated>) return m.omega.front();
        else return m.lo;
    }, v_);
}

double SpectralDensity::hi() const noexcept {
    return std::visit([](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Tabulated>) return m.omega.back();
        else return m.hi;
    }, v_);
}

double SpectralDensity::sup() const noexcept {
    return std::visit([](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Flat>) {
            return m.level;
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
            return std::max(m.amplitude * std::pow(m.lo, m.exponent),
                            m.amplitude * std::pow(m.hi, m.exponent));
        } else {
            return *std::max_element(m.value.begin(), m.value.end());
        }
    }, v_);
}

std::vector<double> SpectralDensity::kinks() const {
    if (const auto* t = std::get_if<Tabulated>(&v_)) {
        return {t->omega.begin() + 1, t->omega.end() - 1};
    }
    return {};
}

std::optional<double> SpectralDensity::tail_level() const noexcept {
    if (const auto* f = std::get_if<Flat>(&v_); f && f->flat_tail) return f->level;
    return std::nullopt;
}

// ------------------------------ Kernels --------------------------------------

double NumericKernel::operator()(double e) const noexcept {
    if (values.empty() || !(e >= eps_min && e <= eps_max())) return 0.0;
    const double x = (e - eps_min) / step;
    auto k = static_cast<std::size_t>(x);
    if (k >= values.size() - 1) return values.back();
    const double t = x - static_cast<double>(k);
    return (1.0 - t) * values[k] + t * values[k + 1];
}

double NumericKernel::mass() const noexcept {
    if (values.size() < 2) return 0.0;
    double s = 0.5 * (values.front() + values.back());
    for (std::size_t k = 1; k + 1 < values.size(); ++k) s += values[k];
    return s * step;
}

DissipationKernel DissipationKernel::lorentzian(double width, double shift) {
    require(std::isfinite(width) && width > 0.0,
            "Lorentzian width must be > 0 (use the Dirac kernel for zero width)");
    require(std::isfinite(shift), "Lorentzian shift must be finite");
    return DissipationKernel(Lorentzian{width, shift});
}

DissipationKernel DissipationKernel::double_delta(double rabi_frequency) {
    require(std::isfinite(rabi_frequency) && rabi_frequency > 0.0, "Rabi frequency must be > 0");
    return DissipationKernel(DoubleDelta{rabi_frequency});
}

DissipationKernel DissipationKernel::numeric(NumericKernel k) {
    require(k.values.size() >= 2 && k.step > 0.0, "numeric kernel needs a grid");
    for (double v : k.values) require(std::isfinite(v), "numeric kernel values must be finite");
    k.defect = std::abs(k.mass() - 1.0);
    return DissipationKernel(std::move(k));
}

std::string DissipationKernel::name() const {
    switch (v_.index()) {
        case 0: return "dirac";
        case 1: return "lorentzian";
        case 2: return "double_delta";
        default: return "numeric";
    }
}

double eval_kernel(const DissipationKernel& kernel, double eps) {
    return std::visit([eps](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Lorentzian>) {
            const double d = eps - k.shift;
            return k.width / (pi * (k.width * k.width + d * d));
        } else if constexpr (std::is_same_v<T, NumericKernel>) {
            return k(eps);
        } else {
            fail(ErrorKind::DistributionalKernel,
                 "pointwise evaluation of a distributional kernel");
        }
    }, kernel.variant());
}

double kernel_normalization_defect(const DissipationKernel& kernel) noexcept {
    if (const auto* n = std::get_if<NumericKernel>(&kernel.variant())) return n->defect;
    return 0.0;
}

// ------------------------------ Traces ---------------------------------------

DissipationTrace DissipationTrace::uniform(double step, std::vector<cplx> values, std::string label) {
    require(step > 0.0 && std::isfinite(step), "trace step must be > 0");
    DissipationTrace t;
    t.times.resize(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) t.times[j] = step * static_cast<double>(j);
    t.values = std::move(values);
    t.label = std::move(label);
    return t;
}

namespace {

// Moments of exp(-i th s) on [0,1]: a = int (1-s) e ds, b = int s e ds.
void half_hat_moments(double th, cplx& a, cplx& b) {
    const cplx mi(0.0, -1.0);
    if (std::abs(th) < 0.5) {
        cplx term = 1.0;  // (-i th)^m / m!
        cplx i0 = 0.0, i1 = 0.0;
        for (int m = 0; m < 16; ++m) {
            i0 += term / static_cast<double>(m + 1);
            i1 += term / static_cast<double>(m + 2);
            term *= mi * th / static_cast<double>(m + 1);
        }
        a = i0 - i1;
        b = i1;
        return;
    }
    const cplx e = std::exp(mi * th);
    const cplx ith(0.0, th);
    const cplx i0 = (1.0 - e) / ith;
    b = -e / ith + i0 / ith;
    a = i0 - b;
}

double hat_weight(double th) {
    if (std::abs(th) < 1e-8) return 1.0 - th * th / 12.0;
    const double s = std::sin(0.5 * th) / (0.5 * th);
    return s * s;
}

std::mutex fftw_plan_mutex;

// S_k = sum_j x_j exp(-2 pi i j k / L) for k in [0, L).
std::vector<cplx> dft(std::vector<cplx> x) {
    const int n = static_cast<int>(x.size());
    std::vector<cplx> out(x.size());
    auto* in_ptr = reinterpret_cast<fftw_complex*>(x.data());
    auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_plan_mutex);
        plan = fftw_plan_dft_1d(n, in_ptr, out_ptr, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(fftw_plan_mutex);
        fftw_destroy_plan(plan);
    }
    return out;
}

} // namespace

DissipationKernel kernel_from_dissipation(const DissipationTrace& trace, const FourierOptions& opts) {
    const std::size_t n = trace.values.size();
    if (n < 64 || trace.times.size() != n) {
        fail(ErrorKind::DegenerateTrace, "dissipation trace needs at least 64 samples");
    }
    const double h = trace.times[1] - trace.times[0];
    if (!(h > 0.0) || std::abs(trace.times[0]) > 1e-12 * h) {
        fail(ErrorKind::NonUniformGrid, "dissipation trace must start at tau = 0 with positive step");
    }
    for (std::size_t j = 1; j < n; ++j) {
        if (std::abs(trace.times[j] - h * static_cast<double>(j)) > 1e-9 * h * static_cast<double>(j)) {
            fail(ErrorKind::NonUniformGrid, "dissipation trace is not uniformly sampled");
        }
    }
    require(opts.taper_fraction >= 0.0 && opts.taper_fraction < 1.0, "taper fraction must be in [0, 1)");

    const double T = h * static_cast<double>(n - 1);
    const double de = pi / T;
    const double eps_max = opts.eps_max.value_or(8.0 * pi / h);
    require(eps_max > 0.0, "eps_max must be > 0");
    if (T * eps_max / (2.0 * pi) < 8.0) {
        fail(ErrorKind::DegenerateTrace, "trace too short: fewer than 8 oscillations resolvable at eps_max");
    }

    // Tapered samples, zero-padded to twice the window so that grid spacing is pi/T.
    const std::size_t L = 2 * (n - 1);
    std::vector<cplx> x(L, cplx(0.0));
    const double taper_start = (1.0 - opts.taper_fraction) * T;
    const double taper_len = opts.taper_fraction * T;
    for (std::size_t j = 0; j < n; ++j) {
        const double tau = h * static_cast<double>(j);
        double w = 1.0;
        if (taper_len > 0.0 && tau > taper_start) {
            w = 0.5 * (1.0 + std::cos(pi * (tau - taper_start) / taper_len));
        }
        x[j] = w * trace.values[j];
    }
    const cplx d_first = x[0];
    const cplx d_last = x[n - 1];
    const auto S = dft(std::move(x));

    const auto K = static_cast<long>(std::ceil(eps_max / de - 1e-9));
    NumericKernel out;
    out.step = de;
    out.eps_min = -static_cast<double>(K) * de;
    out.window = T;
    out.values.resize(static_cast<std::size_t>(2 * K + 1));
    const auto Ll = static_cast<long>(L);
    for (long k = -K; k <= K; ++k) {
        const double th = pi * static_cast<double>(k) / static_cast<double>(n - 1);
        const cplx s = S[static_cast<std::size_t>(((k % Ll) + Ll) % Ll)];
        const cplx e_last = std::polar(1.0, -th * static_cast<double>(n - 1));
        const cplx e_prev = std::polar(1.0, -th * static_cast<double>(n - 2));
        cplx a, b;
        half_hat_moments(th, a, b);
        const cplx integral =
            h * (hat_weight(th) * (s - d_first - d_last * e_last) + d_first * a + d_last * e_prev * b);
        out.values[static_cast<std::size_t>(k + K)] = integral.real() / pi;
    }
    return DissipationKernel::numeric(std::move(out));
}

} // namespace zeno::spectral
