// config.hpp - JSON sweep configuration (schema_version 1).
//
// {
//   "schema_version": 1,
//   "units": "eV",                                  // label only; hbar = 1
//   "scenario": {
//     "m_y": {"type": "power_law", "amplitude": 2e-4, "exponent": 3, "support": [0, 2]},
//     "omega_f": 1.0,
//     "rabi": {"omega": 0.2, "omega_21": 8.0}       // or "unstable" / "scattering"
//   },
//   "sweep": {"param": "rabi.omega", "values": [0.1, 0.2, 0.4]},
//   "routes": "both",
//   "dynamic": {"n_y": 1000, "fit_window": [5, 240]},
//   "quadrature": {"rel_tol": 1e-8, "max_intervals": 5000},
//   "output": {"format": "csv"}
// }

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zeno/dynamics.hpp"
#include "zeno/scenarios.hpp"

namespace zeno::cli {

inline constexpr int schema_version = 1;

enum class Routes { Analytic, Dynamic, Both };
enum class Format { Csv, Json };

inline bool wants_analytic(Routes r) { return r != Routes::Dynamic; }
inline bool wants_dynamic(Routes r) { return r != Routes::Analytic; }

std::string to_string(Routes r);

struct DynamicControls {
    std::size_t n_y{1000};
    std::size_t n_z{100};
    std::optional<double> horizon;
    double dt{0.0};
    std::optional<dynamics::FitWindow> fit_window;
    std::size_t samples{1001};
    double stationarity_tolerance{0.05};
    std::size_t dimension_cap{50000};
    std::size_t dense_threshold{2000};
};

struct OutputSpec {
    std::optional<std::string> path;
    Format format{Format::Csv};
};

struct SweepConfig {
    std::string units;
    nlohmann::json scenario_template;
    std::string param;
    std::vector<double> values;
    Routes routes{Routes::Analytic};
    DynamicControls dynamic;
    bool dynamic_given{false};
    rates::QuadratureSettings quadrature;
    OutputSpec output;

    // Scenario template with the sweep parameter set to `value`.
    scenarios::ScenarioSpec scenario_at(double value) const;
    scenarios::ScenarioSpec base_scenario() const;
};

// Throws ConfigError carrying the JSON path of the offending field.
SweepConfig parse_config(const nlohmann::json& doc);
SweepConfig load_config(const std::string& path);

scenarios::ScenarioSpec parse_scenario(const nlohmann::json& j, const std::string& path = "scenario");
spectral::SpectralDensity parse_density(const nlohmann::json& j, const std::string& path);

} // namespace zeno::cli
