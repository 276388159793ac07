// report.hpp - CSV and JSON serialization of sweep rows.
//
// Column order (route-gated columns appear only when the route ran):
//   sweep_param, sweep_value, gamma_analytic*, gamma_dynamic*, gamma0, ratio,
//   status, route_discrepancy (both), quadrature_error, normalization_defect
//   (analytic), im_gamma_dynamic, fit_t_start, fit_t_end, fit_residual
//   (dynamic), diagnostics.
// Floats use the shortest decimal that round-trips; missing values are empty
// in CSV and null in JSON. Diagnostics are joined with ';'.

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "zeno/config.hpp"
#include "zeno/sweep.hpp"

namespace zeno::cli {

std::vector<std::string> report_columns(Routes routes);

std::string format_double(double x);

void write_csv(std::ostream& out, const std::vector<Row>& rows, Routes routes);
void write_json(std::ostream& out, const std::vector<Row>& rows, Routes routes);

std::string report(const std::vector<Row>& rows, Routes routes, Format format);

// Writes to `path`, or stdout when empty. Throws Error(IoError) on failure.
void write_report(const std::string& path, const std::vector<Row>& rows, Routes routes, Format format);

// 0 iff every row has status ok, else 1.
int exit_code(const std::vector<Row>& rows);

} // namespace zeno::cli
