// sweep.hpp - Evaluates a SweepConfig row by row on a bounded worker pool.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "zeno/config.hpp"

namespace zeno::cli {

struct Row {
    std::string param;
    double value{0.0};
    std::optional<double> gamma_analytic;
    std::optional<double> gamma_dynamic;
    std::optional<double> gamma0;
    std::optional<double> ratio;               // analytic gamma / gamma0 when available, else dynamic
    std::optional<double> route_discrepancy;   // |dynamic - analytic| / analytic
    std::optional<double> quadrature_error;
    std::optional<double> normalization_defect;
    std::optional<double> im_gamma_dynamic;
    std::optional<double> fit_t_start;
    std::optional<double> fit_t_end;
    std::optional<double> fit_residual;
    std::string status{"ok"};
    std::vector<std::string> diagnostics;

    bool ok() const noexcept { return status == "ok"; }
};

Row evaluate_row(const SweepConfig& config, double value);

// Rows come back in sweep order whatever the completion order.
std::vector<Row> run(const SweepConfig& config, std::size_t jobs = 1);

} // namespace zeno::cli
