#include "zeno/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zeno/errors.hpp"
#include "zeno/quadrature.hpp"

namespace zeno::rates {

using spectral::DissipationKernel;
using spectral::SpectralDensity;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;

void finish(DecayRateResult& r) {
    if (r.gamma < 0.0) {
        r.gamma = 0.0;
        r.warnings.emplace_back("gamma_clamped");
    }
    if (r.gamma0 > 0.0) r.ratio = r.gamma / r.gamma0;
}

quad::Options quad_options(const QuadratureSettings& q, const SpectralDensity& m) {
    quad::Options o;
    o.rel_tol = q.rel_tol;
    o.abs_tol = 1e-15 * two_pi * std::max(m.sup(), 1e-300);
    o.max_intervals = q.max_intervals;
    return o;
}

std::vector<double> clipped(std::vector<double> pts, double lo, double hi) {
    std::vector<double> out{lo, hi};
    for (double p : pts) {
        if (p > lo && p < hi) out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

DecayRateResult lorentzian_gamma(const SpectralDensity& m, const spectral::Lorentzian& k,
                                 double e0, const QuadratureSettings& q) {
    const double center = e0 + k.shift;
    const double lam = k.width;
    const double lo = m.lo(), hi = m.hi();
    quad::Result res;

    if (lam < q.narrow_fraction * m.width()) {
        // dw L(w - e0) = du / pi with w = center + lam tan u
        auto to_u = [&](double w) { return std::atan((w - center) / lam); };
        std::vector<double> pts;
        pts.push_back(0.0);
        for (double w : m.kinks()) pts.push_back(to_u(w));
        const auto u_pts = clipped(std::move(pts), to_u(lo), to_u(hi));
        auto f = [&](double u) { return 2.0 * m(center + lam * std::tan(u)); };
        res = quad::integrate(f, u_pts, quad_options(q, m));
    } else {
        std::vector<double> pts{center, center - lam, center + lam,
                                center - 10.0 * lam, center + 10.0 * lam};
        for (double w : m.kinks()) pts.push_back(w);
        const auto w_pts = clipped(std::move(pts), lo, hi);
        auto f = [&](double w) {
            const double d = w - center;
            return 2.0 * m(w) * lam / (lam * lam + d * d);
        };
        res = quad::integrate(f, w_pts, quad_options(q, m));
    }

    double gamma = res.value;
    if (auto tail = m.tail_level()) {
        gamma += 2.0 * (*tail) * (0.5 * pi - std::atan((hi - center) / lam));
    }
    auto r = DecayRateResult::make(gamma, two_pi * m(e0), Method::Quadrature);
    r.quadrature_error_estimate = res.error;
    return r;
}

DecayRateResult numeric_gamma(const SpectralDensity& m, const spectral::NumericKernel& k,
                              double e0, const QuadratureSettings& q) {
    const double lo = std::max(m.lo(), e0 + k.eps_min);
    const double hi = std::min(m.hi(), e0 + k.eps_max());
    if (!(lo < hi)) {
        auto r = DecayRateResult::make(0.0, two_pi * m(e0), Method::Quadrature);
        r.quadrature_error_estimate = 0.0;
        return r;
    }
    // Kernel is piecewise linear: break at every node inside the range.
    std::vector<double> pts = m.kinks();
    const auto first = static_cast<std::size_t>(std::max(0.0, std::ceil((lo - e0 - k.eps_min) / k.step)));
    for (std::size_t j = first; j < k.values.size(); ++j) {
        const double w = e0 + k.eps(j);
        if (w >= hi) break;
        pts.push_back(w);
    }
    const auto w_pts = clipped(std::move(pts), lo, hi);
    auto f = [&](double w) { return two_pi * m(w) * k(w - e0); };
    auto opts = quad_options(q, m);
    opts.max_intervals = std::max(opts.max_intervals, 4 * w_pts.size());
    const auto res = quad::integrate(f, w_pts, opts);
    auto r = DecayRateResult::make(res.value, two_pi * m(e0), Method::Quadrature);
    r.quadrature_error_estimate = res.error;
    return r;
}

} // namespace

std::string to_string(Method m) {
    switch (m) {
        case Method::ClosedForm: return "closed_form";
        case Method::Quadrature: return "quadrature";
        case Method::DynamicFit: return "dynamic_fit";
    }
    return "unknown";
}

DecayRateResult DecayRateResult::make(double gamma, double gamma0, Method method) {
    DecayRateResult r;
    r.gamma = gamma;
    r.gamma0 = gamma0;
    r.method = method;
    finish(r);
    return r;
}

DecayRateResult golden_rule_gamma(const SpectralDensity& m, double e0) {
    require(std::isfinite(e0), "E0 must be finite");
    const double g0 = two_pi * m(e0);
    return DecayRateResult::make(g0, g0, Method::ClosedForm);
}

DecayRateResult rabi_gamma(const SpectralDensity& m, double rabi_frequency, double omega_f) {
    require(std::isfinite(omega_f), "omega_f must be finite");
    require(std::isfinite(rabi_frequency) && rabi_frequency > 0.0, "Rabi frequency must be > 0");
    const double half = 0.5 * rabi_frequency;
    const double g = pi * (m(omega_f - half) + m(omega_f + half));
    return DecayRateResult::make(g, two_pi * m(omega_f), Method::ClosedForm);
}

DecayRateResult perturbed_gamma(const SpectralDensity& m, const DissipationKernel& kernel,
                                double e0, const QuadratureSettings& q) {
    require(std::isfinite(e0), "E0 must be finite");
    return std::visit([&](const auto& k) -> DecayRateResult {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, spectral::Dirac>) {
            return golden_rule_gamma(m, e0);
        } else if constexpr (std::is_same_v<T, spectral::DoubleDelta>) {
            return rabi_gamma(m, k.rabi_frequency, e0);
        } else if constexpr (std::is_same_v<T, spectral::Lorentzian>) {
            return lorentzian_gamma(m, k, e0, q);
        } else {
            return numeric_gamma(m, k, e0, q);
        }
    }, kernel.variant());
}

DecayRateResult unstable_gamma(const SpectralDensity& m, double lambda_r, double lambda_i,
                               double omega_f, const QuadratureSettings& q) {
    require(lambda_r > 0.0, "unstable_gamma needs lambda_r > 0");
    return perturbed_gamma(m, DissipationKernel::lorentzian(lambda_r, lambda_i), omega_f, q);
}

EnhancementRatio rabi_enhancement_ratio(double rabi_frequency, double omega_01) {
    if (!(omega_01 > 0.0) || !(rabi_frequency >= 0.0) || !(rabi_frequency < omega_01)) {
        fail(ErrorKind::DomainError, "enhancement ratio needs 0 <= rabi frequency < omega_01");
    }
    const double x = rabi_frequency / omega_01;
    return {1.0 + 0.75 * x * x, rabi_frequency > 0.5 * omega_01};
}

} // namespace zeno::rates
