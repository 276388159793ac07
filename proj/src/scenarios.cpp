#include "zeno/scenarios.hpp"

#include <cmath>
#include <numbers>

#include "zeno/errors.hpp"

namespace zeno::scenarios {

using dynamics::Coupling;
using dynamics::ModelData;
using dynamics::Sector;
using spectral::DissipationKernel;
using spectral::SpectralDensity;

namespace {

constexpr double pi = std::numbers::pi;

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

double unstable_lambda_r(const UnstableLevel& u) {
    if (u.lambda_r) return *u.lambda_r;
    return pi * (*u.m_z)(u.omega_12);
}

double scattering_rate(const Scattering& s) {
    if (s.m_s) return pi * (*s.m_s)(0.0);
    return s.rate.value_or(0.0);
}

// Z-side density used by the dynamic route of the unstable level.
SpectralDensity unstable_z_density(const UnstableLevel& u) {
    if (u.m_z) return *u.m_z;
    const double lam = *u.lambda_r;
    const double b = u.z_half_width > 0.0 ? u.z_half_width : 25.0 * lam;
    return SpectralDensity::flat(lam / pi, u.omega_12 - b, u.omega_12 + b);
}

std::optional<SpectralDensity> scattering_density(const Scattering& s) {
    if (s.m_s) return s.m_s;
    const double r = s.rate.value_or(0.0);
    if (r <= 0.0) return std::nullopt;
    const double b = s.band_half_width > 0.0 ? s.band_half_width : 25.0 * r;
    return SpectralDensity::flat(r / pi, -b, b);
}

constexpr std::size_t fourier_samples = 4097;
constexpr double fourier_window_decays = 40.0;

} // namespace

void ScenarioSpec::validate() const {
    require(std::isfinite(omega_f) && omega_f > 0.0, "omega_f (= omega_01 for a ground-state Y) must be > 0");
    std::visit(overloaded{
        [](const RabiDrive& r) {
            require(r.omega_21 > 0.0, "rabi: omega_21 must be > 0");
            require(r.rabi_frequency > 0.0, "rabi: Rabi frequency must be > 0");
            require(r.rabi_frequency < r.omega_21, "rabi: Rabi frequency must stay below omega_21");
        },
        [](const UnstableLevel& u) {
            require(u.omega_12 > 0.0, "unstable: omega_12 must be > 0");
            require(u.m_z || u.lambda_r, "unstable: needs m_z or lambda_r");
            if (u.lambda_r) require(*u.lambda_r > 0.0, "unstable: lambda_r must be > 0");
            require(std::isfinite(u.lambda_i), "unstable: lambda_i must be finite");
            require(u.z_half_width >= 0.0, "unstable: z_half_width must be >= 0");
        },
        [](const Scattering& s) {
            if (s.rate) require(std::isfinite(*s.rate) && *s.rate >= 0.0, "scattering: rate must be >= 0");
            require(!(s.rate && s.m_s), "scattering: give either rate or m_s, not both");
            require(s.band_half_width >= 0.0, "scattering: band_half_width must be >= 0");
        },
    }, mechanism);
}

std::vector<std::string> ScenarioSpec::warnings() const {
    std::vector<std::string> w;
    if (!(omega_f >= m_y.lo() && omega_f <= m_y.hi())) w.emplace_back("omega_f_outside_support");
    return w;
}

std::string ScenarioSpec::kind() const {
    switch (mechanism.index()) {
        case 0: return "rabi";
        case 1: return "unstable";
        default: return "scattering";
    }
}

AnalyticInputs build_analytic(const ScenarioSpec& spec) {
    spec.validate();
    auto kernel = std::visit(overloaded{
        [](const RabiDrive& r) { return DissipationKernel::double_delta(r.rabi_frequency); },
        [](const UnstableLevel& u) {
            const double lam = unstable_lambda_r(u);
            if (!(lam > 0.0)) return DissipationKernel::dirac();
            return DissipationKernel::lorentzian(lam, u.lambda_i);
        },
        [](const Scattering& s) {
            const double r = scattering_rate(s);
            if (!(r > 0.0)) return DissipationKernel::dirac();
            const double horizon = fourier_window_decays / r;
            auto trace = spectral::DissipationTrace::sample(
                [r](double tau) { return std::complex<double>(std::exp(-r * tau), 0.0); },
                horizon, fourier_samples, "scattering");
            return spectral::kernel_from_dissipation(trace);
        },
    }, spec.mechanism);
    return {spec.m_y, std::move(kernel), spec.omega_f};
}

rates::DecayRateResult analytic_gamma(const ScenarioSpec& spec, const rates::QuadratureSettings& q) {
    const auto in = build_analytic(spec);
    auto r = rates::perturbed_gamma(in.m, in.kernel, in.e0, q);
    for (auto& w : spec.warnings()) r.warnings.push_back(w);
    return r;
}

std::complex<double> analytic_dissipation(const ScenarioSpec& spec, double tau) {
    return std::visit(overloaded{
        [tau](const RabiDrive& r) { return std::complex<double>(std::cos(0.5 * r.rabi_frequency * tau), 0.0); },
        [tau](const UnstableLevel& u) {
            const double lam = unstable_lambda_r(u);
            return std::exp(std::complex<double>(-lam * tau, u.lambda_i * tau));
        },
        [tau](const Scattering& s) {
            return std::complex<double>(std::exp(-scattering_rate(s) * tau), 0.0);
        },
    }, spec.mechanism);
}

dynamics::DiscretizedModel build_dynamic(const ScenarioSpec& spec, std::size_t n_y, std::size_t n_z,
                                         const dynamics::ModelLimits& limits) {
    spec.validate();
    require(n_y >= 100, "N_Y must be >= 100");
    const bool chained = !std::holds_alternative<RabiDrive>(spec.mechanism);
    if (chained) require(n_z >= 50, "N_Z must be >= 50");

    const std::size_t dim = chained ? 1 + n_y + n_y * n_z : 1 + 2 * n_y;
    if (dim > limits.dimension_cap) {
        fail(ErrorKind::DimensionOverBudget,
             "scenario model dimension " + std::to_string(dim) + " exceeds cap " +
                 std::to_string(limits.dimension_cap));
    }

    const auto y = dynamics::discretize(spec.m_y, n_y);
    ModelData d;
    d.energies.reserve(dim);
    d.sectors.reserve(dim);
    d.energies.push_back(spec.omega_f);
    d.sectors.push_back(Sector::Initial);
    for (std::size_t k = 0; k < n_y; ++k) {
        d.energies.push_back(y.omega[k]);
        d.sectors.push_back(Sector::Xi);
        if (y.coupling[k] != 0.0) d.v.emplace_back(k + 1, y.coupling[k]);
    }
    d.xi_span = spec.m_y.width();
    double coarsest = y.spacing;

    // Attaches a per-mode chain: eta_{k,j} at xi energy + offset_j, coupling c_j.
    auto attach_chains = [&](const dynamics::ContinuumGrid& g, double offset) {
        for (std::size_t k = 0; k < n_y; ++k) {
            for (std::size_t j = 0; j < g.omega.size(); ++j) {
                const std::size_t idx = d.energies.size();
                d.energies.push_back(y.omega[k] + offset + g.omega[j]);
                d.sectors.push_back(Sector::Eta);
                if (g.coupling[j] != 0.0) d.w_static.push_back(Coupling{k + 1, idx, g.coupling[j]});
            }
        }
        coarsest = std::max(coarsest, g.spacing);
    };

    std::visit(overloaded{
        [&](const RabiDrive& r) {
            dynamics::Drive drive;
            drive.frequency = r.omega_21;
            for (std::size_t k = 0; k < n_y; ++k) {
                const std::size_t idx = d.energies.size();
                d.energies.push_back(y.omega[k] + r.omega_21);
                d.sectors.push_back(Sector::Eta);
                drive.amplitude.push_back(Coupling{k + 1, idx, r.rabi_frequency});
            }
            d.drive = std::move(drive);
        },
        [&](const UnstableLevel& u) {
            const auto z = dynamics::discretize(unstable_z_density(u), n_z);
            attach_chains(z, -u.omega_12);
        },
        [&](const Scattering& s) {
            if (auto ms = scattering_density(s)) {
                attach_chains(dynamics::discretize(*ms, n_z), 0.0);
            } else {
                // No detector: W = 0, the eta states stay decoupled.
                const dynamics::ContinuumGrid empty{std::vector<double>(n_z, 0.0),
                                                    std::vector<double>(n_z, 0.0), 0.0};
                attach_chains(empty, 0.0);
            }
        },
    }, spec.mechanism);

    d.recurrence_time = 2.0 * pi / coarsest;
    return dynamics::DiscretizedModel(std::move(d), limits);
}

} // namespace zeno::scenarios
