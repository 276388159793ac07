#include "zeno/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "zeno/errors.hpp"
#include "zeno/rates.hpp"
#include "zeno/scenarios.hpp"

namespace zeno::cli {

namespace {

void append(std::vector<std::string>& out, const std::vector<std::string>& more) {
    for (const auto& w : more) {
        if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
    }
}

void analytic_route(const SweepConfig& config, const scenarios::ScenarioSpec& spec, Row& row) {
    const auto in = scenarios::build_analytic(spec);
    const auto r = rates::perturbed_gamma(in.m, in.kernel, in.e0, config.quadrature);
    row.gamma_analytic = r.gamma;
    row.gamma0 = r.gamma0;
    row.ratio = r.ratio;
    row.quadrature_error = r.quadrature_error_estimate.value_or(0.0);
    row.normalization_defect = spectral::kernel_normalization_defect(in.kernel);
    append(row.diagnostics, r.warnings);
}

void dynamic_route(const SweepConfig& config, const scenarios::ScenarioSpec& spec, Row& row) {
    const auto& c = config.dynamic;
    const auto model = scenarios::build_dynamic(spec, c.n_y, c.n_z, dynamics::ModelLimits{c.dimension_cap});
    const double gamma0 = rates::golden_rule_gamma(spec.m_y, spec.omega_f).gamma;

    dynamics::FitWindow window;
    if (c.fit_window) {
        window = *c.fit_window;
    } else {
        // The analytic rate sets the decay time scale; gamma0 is the fallback.
        double expected = gamma0;
        if (row.gamma_analytic && *row.gamma_analytic > 0.0) expected = *row.gamma_analytic;
        else {
            try {
                expected = scenarios::analytic_gamma(spec, config.quadrature).gamma;
            } catch (const Error&) {
            }
        }
        window = dynamics::default_fit_window(model, expected > 0.0 ? expected : gamma0);
    }

    dynamics::PropagationOptions opts;
    opts.horizon = c.horizon.value_or(window.end);
    opts.dt = c.dt;
    opts.samples = c.samples;
    opts.dense_threshold = c.dense_threshold;
    const auto trace = dynamics::amplitude_trace(model, opts);
    const auto [r, diag] = dynamics::fit_decay(trace, window, gamma0);

    row.gamma_dynamic = r.gamma;
    row.gamma0 = gamma0;
    if (!row.ratio) row.ratio = r.ratio;
    row.im_gamma_dynamic = diag.gamma.imag();
    row.fit_t_start = diag.window.start;
    row.fit_t_end = diag.window.end;
    row.fit_residual = diag.residual_rms;
    append(row.diagnostics, r.warnings);
}

void clear_numbers(Row& row) {
    row.gamma_analytic.reset();
    row.gamma_dynamic.reset();
    row.gamma0.reset();
    row.ratio.reset();
    row.route_discrepancy.reset();
    row.quadrature_error.reset();
    row.normalization_defect.reset();
    row.im_gamma_dynamic.reset();
    row.fit_t_start.reset();
    row.fit_t_end.reset();
    row.fit_residual.reset();
}

} // namespace

Row evaluate_row(const SweepConfig& config, double value) {
    Row row;
    row.param = config.param;
    row.value = value;
    try {
        const auto spec = config.scenario_at(value);
        append(row.diagnostics, spec.warnings());
        if (wants_analytic(config.routes)) analytic_route(config, spec, row);
        if (wants_dynamic(config.routes)) dynamic_route(config, spec, row);
        if (row.gamma_analytic && row.gamma_dynamic && *row.gamma_analytic > 0.0) {
            row.route_discrepancy = std::abs(*row.gamma_dynamic - *row.gamma_analytic) / *row.gamma_analytic;
        }
    } catch (const Error& e) {
        clear_numbers(row);
        row.status = std::string(to_string(e.kind()));
        row.diagnostics.push_back(e.what());
    } catch (const std::exception& e) {
        clear_numbers(row);
        row.status = "internal_error";
        row.diagnostics.push_back(e.what());
    }
    return row;
}

std::vector<Row> run(const SweepConfig& config, std::size_t jobs) {
    const std::size_t n = config.values.size();
    std::vector<Row> rows(n);
    jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) rows[i] = evaluate_row(config, config.values[i]);
    };
    if (jobs == 1) {
        worker();
        return rows;
    }
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < jobs; ++k) pool.emplace_back(worker);
    pool.clear();
    return rows;
}

} // namespace zeno::cli
