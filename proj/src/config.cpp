#include "zeno/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "zeno/errors.hpp"

namespace zeno::cli {

using nlohmann::json;
using spectral::SpectralDensity;

namespace {

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : j.items()) {
        if (!ok.count(item.key())) throw ConfigError(path + "." + item.key(), "unknown field");
    }
}

double number(const json& j, const std::string& key, const std::string& path) {
    const std::string p = path + "." + key;
    if (!j.contains(key)) throw ConfigError(p, "missing required number");
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(p, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(p, "must be finite");
    return x;
}

std::optional<double> opt_number(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) return std::nullopt;
    return number(j, key, path);
}

std::size_t count(const json& j, const std::string& key, const std::string& path, std::size_t fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigError(path + "." + key, "expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

std::pair<double, double> interval(const json& j, const std::string& key, const std::string& path) {
    const std::string p = path + "." + key;
    if (!j.contains(key)) throw ConfigError(p, "missing required [lo, hi] pair");
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ConfigError(p, "expected [lo, hi]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<double> number_array(const json& j, const std::string& key, const std::string& path) {
    const std::string p = path + "." + key;
    if (!j.contains(key) || !j.at(key).is_array()) throw ConfigError(p, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) throw ConfigError(p, "expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

// Re-throws library validation failures as config errors at `path`.
template <class F>
auto at_path(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
}

std::vector<std::string> split_path(const std::string& dotted) {
    std::vector<std::string> parts;
    std::stringstream ss(dotted);
    std::string part;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    return parts;
}

json with_value(json scenario, const std::string& param, double value) {
    const auto parts = split_path(param);
    json* node = &scenario;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!node->is_object() || !node->contains(parts[i])) {
            throw ConfigError("sweep.param", "'" + param + "' does not name a scenario field");
        }
        node = &(*node)[parts[i]];
    }
    if (!node->is_object()) throw ConfigError("sweep.param", "'" + param + "' does not name a scenario field");
    (*node)[parts.back()] = value;
    return scenario;
}

} // namespace

std::string to_string(Routes r) {
    switch (r) {
        case Routes::Analytic: return "analytic";
        case Routes::Dynamic: return "dynamic";
        case Routes::Both: return "both";
    }
    return "unknown";
}

SpectralDensity parse_density(const json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        throw ConfigError(path + ".type", "expected \"flat\", \"power_law\" or \"tabulated\"");
    }
    const auto type = j.at("type").get<std::string>();
    return at_path(path, [&] {
        if (type == "flat") {
            only_keys(j, path, {"type", "level", "support", "semi_infinite"});
            const auto [lo, hi] = interval(j, "support", path);
            const double level = number(j, "level", path);
            const bool tail = j.value("semi_infinite", false);
            return tail ? SpectralDensity::flat_semi_infinite(level, lo, hi) : SpectralDensity::flat(level, lo, hi);
        }
        if (type == "power_law") {
            only_keys(j, path, {"type", "amplitude", "exponent", "support"});
            const auto [lo, hi] = interval(j, "support", path);
            return SpectralDensity::power_law(number(j, "amplitude", path), number(j, "exponent", path), lo, hi);
        }
        if (type == "tabulated") {
            only_keys(j, path, {"type", "omega", "value"});
            return SpectralDensity::tabulated(number_array(j, "omega", path), number_array(j, "value", path));
        }
        throw ConfigError(path + ".type", "unknown spectral density type '" + type + "'");
    });
}

scenarios::ScenarioSpec parse_scenario(const json& j, const std::string& path) {
    only_keys(j, path, {"m_y", "omega_f", "rabi", "unstable", "scattering"});
    if (!j.contains("m_y")) throw ConfigError(path + ".m_y", "missing spectral density");
    auto m_y = parse_density(j.at("m_y"), path + ".m_y");
    const double omega_f = number(j, "omega_f", path);

    const int mechanisms = static_cast<int>(j.contains("rabi")) + static_cast<int>(j.contains("unstable")) +
                           static_cast<int>(j.contains("scattering"));
    if (mechanisms != 1) throw ConfigError(path, "exactly one of rabi, unstable, scattering is required");

    scenarios::Mechanism mech;
    if (j.contains("rabi")) {
        const auto p = path + ".rabi";
        const auto& r = j.at("rabi");
        only_keys(r, p, {"omega", "omega_21"});
        mech = scenarios::RabiDrive{number(r, "omega", p), number(r, "omega_21", p)};
    } else if (j.contains("unstable")) {
        const auto p = path + ".unstable";
        const auto& u = j.at("unstable");
        only_keys(u, p, {"m_z", "omega_12", "lambda_r", "lambda_i", "z_half_width"});
        scenarios::UnstableLevel level;
        if (u.contains("m_z")) level.m_z = parse_density(u.at("m_z"), p + ".m_z");
        level.omega_12 = number(u, "omega_12", p);
        level.lambda_r = opt_number(u, "lambda_r", p);
        level.lambda_i = opt_number(u, "lambda_i", p).value_or(0.0);
        level.z_half_width = opt_number(u, "z_half_width", p).value_or(0.0);
        mech = level;
    } else {
        const auto p = path + ".scattering";
        const auto& s = j.at("scattering");
        only_keys(s, p, {"rate", "m_s", "band_half_width"});
        scenarios::Scattering sc;
        sc.rate = opt_number(s, "rate", p);
        if (s.contains("m_s")) sc.m_s = parse_density(s.at("m_s"), p + ".m_s");
        sc.band_half_width = opt_number(s, "band_half_width", p).value_or(0.0);
        mech = sc;
    }
    scenarios::ScenarioSpec spec{std::move(m_y), omega_f, std::move(mech)};
    at_path(path, [&] { spec.validate(); return 0; });
    return spec;
}

scenarios::ScenarioSpec SweepConfig::scenario_at(double value) const {
    return parse_scenario(with_value(scenario_template, param, value));
}

scenarios::ScenarioSpec SweepConfig::base_scenario() const { return parse_scenario(scenario_template); }

SweepConfig parse_config(const json& doc) {
    only_keys(doc, "$", {"schema_version", "units", "scenario", "sweep", "routes", "dynamic", "quadrature", "output"});
    if (!doc.contains("schema_version") || !doc.at("schema_version").is_number_integer()) {
        throw ConfigError("schema_version", "missing integer schema_version");
    }
    if (doc.at("schema_version").get<int>() != schema_version) {
        throw ConfigError("schema_version", "unsupported version (expected 1)");
    }

    SweepConfig cfg;
    if (doc.contains("units")) {
        if (!doc.at("units").is_string()) throw ConfigError("units", "expected a string label");
        cfg.units = doc.at("units").get<std::string>();
    }
    if (!doc.contains("scenario")) throw ConfigError("scenario", "missing scenario");
    cfg.scenario_template = doc.at("scenario");
    parse_scenario(cfg.scenario_template);

    // sweep
    if (!doc.contains("sweep")) throw ConfigError("sweep", "missing sweep");
    const auto& sw = doc.at("sweep");
    only_keys(sw, "sweep", {"param", "values", "start", "stop", "count", "spacing"});
    if (!sw.contains("param") || !sw.at("param").is_string()) throw ConfigError("sweep.param", "expected a string");
    cfg.param = sw.at("param").get<std::string>();
    if (sw.contains("values")) {
        if (sw.contains("start") || sw.contains("stop") || sw.contains("count")) {
            throw ConfigError("sweep", "give either values or start/stop/count");
        }
        cfg.values = number_array(sw, "values", "sweep");
    } else {
        const double start = number(sw, "start", "sweep");
        const double stop = number(sw, "stop", "sweep");
        const std::size_t n = count(sw, "count", "sweep", 0);
        if (n == 0) throw ConfigError("sweep.count", "must be >= 1");
        const std::string spacing = sw.value("spacing", std::string("linear"));
        if (spacing != "linear" && spacing != "log") throw ConfigError("sweep.spacing", "expected linear or log");
        if (spacing == "log" && !(start > 0.0 && stop > 0.0)) {
            throw ConfigError("sweep", "log spacing needs start, stop > 0");
        }
        for (std::size_t k = 0; k < n; ++k) {
            const double f = n == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(n - 1);
            cfg.values.push_back(spacing == "log" ? start * std::pow(stop / start, f) : start + (stop - start) * f);
        }
        if (n > 1) cfg.values.back() = stop;
    }
    if (cfg.values.empty()) throw ConfigError("sweep.values", "must be nonempty");
    for (double v : cfg.values) {
        if (!std::isfinite(v)) throw ConfigError("sweep.values", "must be finite");
    }
    if (!std::is_sorted(cfg.values.begin(), cfg.values.end())) {
        throw ConfigError("sweep.values", "must be sorted ascending");
    }
    // The parameter must land on a scenario field that parses.
    cfg.scenario_at(cfg.values.front());

    // routes
    const std::string routes = doc.value("routes", std::string("analytic"));
    if (routes == "analytic") cfg.routes = Routes::Analytic;
    else if (routes == "dynamic") cfg.routes = Routes::Dynamic;
    else if (routes == "both") cfg.routes = Routes::Both;
    else throw ConfigError("routes", "expected analytic, dynamic or both");

    if (doc.contains("dynamic")) {
        const auto& d = doc.at("dynamic");
        only_keys(d, "dynamic", {"n_y", "n_z", "horizon", "dt", "fit_window", "samples",
                                 "stationarity_tolerance", "dimension_cap", "dense_threshold"});
        cfg.dynamic_given = true;
        auto& c = cfg.dynamic;
        c.n_y = count(d, "n_y", "dynamic", c.n_y);
        c.n_z = count(d, "n_z", "dynamic", c.n_z);
        c.horizon = opt_number(d, "horizon", "dynamic");
        if (c.horizon && !(*c.horizon > 0.0)) throw ConfigError("dynamic.horizon", "must be > 0");
        c.dt = opt_number(d, "dt", "dynamic").value_or(0.0);
        if (c.dt < 0.0) throw ConfigError("dynamic.dt", "must be >= 0");
        if (d.contains("fit_window")) {
            const auto [a, b] = interval(d, "fit_window", "dynamic");
            if (!(a < b)) throw ConfigError("dynamic.fit_window", "needs start < end");
            c.fit_window = dynamics::FitWindow{a, b};
        }
        c.samples = count(d, "samples", "dynamic", c.samples);
        if (c.samples < 16) throw ConfigError("dynamic.samples", "must be >= 16");
        c.stationarity_tolerance = opt_number(d, "stationarity_tolerance", "dynamic").value_or(c.stationarity_tolerance);
        c.dimension_cap = count(d, "dimension_cap", "dynamic", c.dimension_cap);
        c.dense_threshold = count(d, "dense_threshold", "dynamic", c.dense_threshold);
    }

    if (doc.contains("quadrature")) {
        const auto& q = doc.at("quadrature");
        only_keys(q, "quadrature", {"rel_tol", "max_intervals"});
        cfg.quadrature.rel_tol = opt_number(q, "rel_tol", "quadrature").value_or(cfg.quadrature.rel_tol);
        if (!(cfg.quadrature.rel_tol > 0.0)) throw ConfigError("quadrature.rel_tol", "must be > 0");
        cfg.quadrature.max_intervals = count(q, "max_intervals", "quadrature", cfg.quadrature.max_intervals);
        if (cfg.quadrature.max_intervals == 0) throw ConfigError("quadrature.max_intervals", "must be >= 1");
    }

    if (doc.contains("output")) {
        const auto& o = doc.at("output");
        only_keys(o, "output", {"path", "format"});
        if (o.contains("path")) {
            if (!o.at("path").is_string()) throw ConfigError("output.path", "expected a string");
            cfg.output.path = o.at("path").get<std::string>();
        }
        const std::string fmt = o.value("format", std::string("csv"));
        if (fmt == "csv") cfg.output.format = Format::Csv;
        else if (fmt == "json") cfg.output.format = Format::Json;
        else throw ConfigError("output.format", "expected csv or json");
    }
    return cfg;
}

SweepConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("$", "cannot open config file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("$", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

} // namespace zeno::cli
