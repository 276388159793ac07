// zeno.cpp - command-line front end: run, validate, kernel, trace.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zeno/config.hpp"
#include "zeno/dynamics.hpp"
#include "zeno/errors.hpp"
#include "zeno/report.hpp"
#include "zeno/scenarios.hpp"
#include "zeno/spectral.hpp"
#include "zeno/sweep.hpp"

namespace {

using namespace zeno;
using cli::format_double;

constexpr int exit_ok = 0;
constexpr int exit_partial = 1;
constexpr int exit_config = 2;

struct Range {
    double lo{0.0};
    double hi{0.0};
    std::size_t n{0};
};

Range parse_range(const std::string& text) {
    Range r;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%zu%c", &r.lo, &r.hi, &r.n, &tail) != 3 || r.n < 2 || !(r.lo < r.hi)) {
        throw ConfigError("--range", "expected a:b:n with a < b and n >= 2");
    }
    return r;
}

scenarios::ScenarioSpec pick_scenario(const cli::SweepConfig& cfg, std::optional<double> value) {
    return cfg.scenario_at(value.value_or(cfg.values.front()));
}

// Distributional kernels are sampled through the Fourier route from their
// closed-form D(tau) over `window`. The mass defect falls like (eps_reach * step)^2.
spectral::DissipationKernel numeric_kernel(const scenarios::ScenarioSpec& spec, double window, double eps_reach) {
    const double h = std::numbers::pi / (16.0 * eps_reach);
    const auto count = static_cast<std::size_t>(std::ceil(window / h)) + 1;
    if (count > (std::size_t{1} << 24)) {
        fail(ErrorKind::InvalidArgument, "--window too long for the requested range");
    }
    const auto trace = spectral::DissipationTrace::sample(
        [&](double tau) { return scenarios::analytic_dissipation(spec, tau); }, window, std::max<std::size_t>(count, 64),
        "analytic");
    return spectral::kernel_from_dissipation(trace);
}

int cmd_kernel(const cli::SweepConfig& cfg, const std::string& range_text, std::optional<double> window,
               std::optional<double> value) {
    const Range range = parse_range(range_text);
    const auto spec = pick_scenario(cfg, value);
    auto kernel = scenarios::build_analytic(spec).kernel;

    double reach = std::max({std::abs(range.lo), std::abs(range.hi), 1e-12});
    if (const auto* r = std::get_if<scenarios::RabiDrive>(&spec.mechanism)) reach = std::max(reach, 0.5 * r->rabi_frequency);
    if (kernel.is_distributional() || window) {
        double t = 0.0;
        if (window) {
            t = *window;
        } else if (const auto* r = std::get_if<scenarios::RabiDrive>(&spec.mechanism)) {
            t = 400.0 / r->rabi_frequency;
        } else {
            // Twenty kernel grid points per output spacing.
            t = 20.0 * std::numbers::pi * static_cast<double>(range.n - 1) / (range.hi - range.lo);
        }
        kernel = numeric_kernel(spec, t, reach);
    }
    if (const auto* k = std::get_if<spectral::NumericKernel>(&kernel.variant())) {
        std::cerr << "normalization_defect=" << format_double(k->defect) << "\n";
    }
    std::cout << "epsilon,delta\n";
    for (std::size_t i = 0; i < range.n; ++i) {
        const double e = range.lo + (range.hi - range.lo) * static_cast<double>(i) / static_cast<double>(range.n - 1);
        std::cout << format_double(e) << ',' << format_double(spectral::eval_kernel(kernel, e)) << '\n';
    }
    return exit_ok;
}

int cmd_trace(const cli::SweepConfig& cfg, const std::string& quantity, double horizon, std::size_t samples,
              std::optional<double> value) {
    if (quantity != "F" && quantity != "D") throw ConfigError("--quantity", "expected F or D");
    if (!(horizon > 0.0)) throw ConfigError("--horizon", "must be > 0");
    const auto spec = pick_scenario(cfg, value);
    const auto& c = cfg.dynamic;
    const auto model = scenarios::build_dynamic(spec, c.n_y, c.n_z, dynamics::ModelLimits{c.dimension_cap});

    std::vector<double> times;
    std::vector<std::complex<double>> values;
    if (quantity == "F") {
        dynamics::PropagationOptions opts;
        opts.horizon = horizon;
        opts.dt = c.dt;
        opts.samples = samples;
        opts.dense_threshold = c.dense_threshold;
        auto tr = dynamics::amplitude_trace(model, opts);
        times = std::move(tr.times);
        values = std::move(tr.values);
    } else {
        dynamics::DissipationOptions opts;
        opts.horizon = horizon;
        opts.dt = c.dt;
        opts.samples = samples;
        opts.stationarity_tolerance = c.stationarity_tolerance;
        opts.dense_threshold = c.dense_threshold;
        auto tr = dynamics::dissipation_trace(model, opts, "D");
        times = std::move(tr.times);
        values = std::move(tr.values);
    }
    std::cout << (quantity == "F" ? "t" : "tau") << ",re,im,abs\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::cout << format_double(times[i]) << ',' << format_double(values[i].real()) << ','
                  << format_double(values[i].imag()) << ',' << format_double(std::abs(values[i])) << '\n';
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zeno - final-state dissipation and Zeno-modified decay rates"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format;
    std::size_t jobs = 1;
    std::string range;
    std::optional<double> window;
    std::optional<double> value;
    std::string quantity;
    double horizon = 0.0;
    std::size_t samples = 1001;

    auto* run = app.add_subcommand("run", "evaluate a sweep and write the report");
    run->add_option("config", config_path, "config JSON")->required();
    run->add_option("--out", out_path, "output file (default: config output.path or stdout)");
    run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--jobs", jobs, "parallel rows")->check(CLI::PositiveNumber);

    auto* validate = app.add_subcommand("validate", "check a config without running it");
    validate->add_option("config", config_path, "config JSON")->required();

    auto* kernel = app.add_subcommand("kernel", "emit kernel samples Delta(eps)");
    kernel->add_option("config", config_path, "config JSON")->required();
    kernel->add_option("--range", range, "a:b:n")->required();
    kernel->add_option("--window", window, "D(tau) window for the Fourier route");
    kernel->add_option("--value", value, "sweep value (default: first)");

    auto* trace = app.add_subcommand("trace", "emit F(t) or D(tau) from the discretized model");
    trace->add_option("config", config_path, "config JSON")->required();
    trace->add_option("--quantity", quantity, "F or D")->required()->check(CLI::IsMember({"F", "D"}));
    trace->add_option("--horizon", horizon, "duration")->required();
    trace->add_option("--samples", samples, "output points");
    trace->add_option("--value", value, "sweep value (default: first)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        const auto cfg = cli::load_config(config_path);
        if (*validate) {
            for (double v : cfg.values) {
                for (const auto& w : cfg.scenario_at(v).warnings()) {
                    std::cerr << "warning at " << format_double(v) << ": " << w << "\n";
                }
            }
            std::cout << "ok: " << cfg.values.size() << " rows, routes=" << cli::to_string(cfg.routes) << "\n";
            return exit_ok;
        }
        if (*run) {
            auto fmt = cfg.output.format;
            if (!format.empty()) fmt = format == "json" ? cli::Format::Json : cli::Format::Csv;
            const std::string path = !out_path.empty() ? out_path : cfg.output.path.value_or("");
            const auto rows = cli::run(cfg, jobs);
            cli::write_report(path, rows, cfg.routes, fmt);
            return cli::exit_code(rows) == 0 ? exit_ok : exit_partial;
        }
        if (*kernel) return cmd_kernel(cfg, range, window, value);
        if (*trace) return cmd_trace(cfg, quantity, horizon, samples, value);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const Error& e) {
        std::cerr << to_string(e.kind()) << ": " << e.what() << "\n";
        return exit_partial;
    }
    return exit_ok;
}
