#include "zeno/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "zeno/errors.hpp"

namespace zeno::cli {

namespace {

struct Cell {
    enum class Kind { Empty, Number, Text } kind{Kind::Empty};
    double number{0.0};
    std::string text;
};

Cell num(const std::optional<double>& x) {
    if (!x) return {};
    return {Cell::Kind::Number, *x, {}};
}

Cell txt(std::string s) { return {Cell::Kind::Text, 0.0, std::move(s)}; }

std::string joined(const std::vector<std::string>& items) {
    std::string s;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) s += ';';
        s += items[i];
    }
    return s;
}

std::vector<Cell> cells(const Row& r, Routes routes) {
    std::vector<Cell> c{txt(r.param), num(r.value)};
    if (wants_analytic(routes)) c.push_back(num(r.gamma_analytic));
    if (wants_dynamic(routes)) c.push_back(num(r.gamma_dynamic));
    c.push_back(num(r.gamma0));
    c.push_back(num(r.ratio));
    c.push_back(txt(r.status));
    if (routes == Routes::Both) c.push_back(num(r.route_discrepancy));
    if (wants_analytic(routes)) {
        c.push_back(num(r.quadrature_error));
        c.push_back(num(r.normalization_defect));
    }
    if (wants_dynamic(routes)) {
        c.push_back(num(r.im_gamma_dynamic));
        c.push_back(num(r.fit_t_start));
        c.push_back(num(r.fit_t_end));
        c.push_back(num(r.fit_residual));
    }
    c.push_back(txt(joined(r.diagnostics)));
    return c;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}

} // namespace

std::vector<std::string> report_columns(Routes routes) {
    std::vector<std::string> c{"sweep_param", "sweep_value"};
    if (wants_analytic(routes)) c.emplace_back("gamma_analytic");
    if (wants_dynamic(routes)) c.emplace_back("gamma_dynamic");
    c.insert(c.end(), {"gamma0", "ratio", "status"});
    if (routes == Routes::Both) c.emplace_back("route_discrepancy");
    if (wants_analytic(routes)) c.insert(c.end(), {"quadrature_error", "normalization_defect"});
    if (wants_dynamic(routes)) c.insert(c.end(), {"im_gamma_dynamic", "fit_t_start", "fit_t_end", "fit_residual"});
    c.emplace_back("diagnostics");
    return c;
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const std::vector<Row>& rows, Routes routes) {
    const auto cols = report_columns(routes);
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& r : rows) {
        const auto cs = cells(r, routes);
        for (std::size_t i = 0; i < cs.size(); ++i) {
            if (i) out << ',';
            if (cs[i].kind == Cell::Kind::Number) out << format_double(cs[i].number);
            else if (cs[i].kind == Cell::Kind::Text) out << csv_escape(cs[i].text);
        }
        out << '\n';
    }
}

void write_json(std::ostream& out, const std::vector<Row>& rows, Routes routes) {
    const auto cols = report_columns(routes);
    // Numbers are written by hand so the decimal matches the CSV exactly.
    out << "[";
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto cs = cells(rows[k], routes);
        out << (k ? ",\n " : "\n ") << "{";
        for (std::size_t i = 0; i < cs.size(); ++i) {
            out << (i ? ", " : "") << nlohmann::json(cols[i]).dump() << ": ";
            const bool finite = cs[i].kind == Cell::Kind::Number && std::isfinite(cs[i].number);
            if (finite) out << format_double(cs[i].number);
            else if (cs[i].kind == Cell::Kind::Text) out << nlohmann::json(cs[i].text).dump();
            else out << "null";
        }
        out << "}";
    }
    out << (rows.empty() ? "]\n" : "\n]\n");
}

std::string report(const std::vector<Row>& rows, Routes routes, Format format) {
    std::ostringstream s;
    if (format == Format::Json) write_json(s, rows, routes);
    else write_csv(s, rows, routes);
    return s.str();
}

void write_report(const std::string& path, const std::vector<Row>& rows, Routes routes, Format format) {
    const std::string text = report(rows, routes, format);
    if (path.empty()) {
        std::cout << text << std::flush;
        if (!std::cout) fail(ErrorKind::IoError, "failed writing report to stdout");
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::IoError, "cannot open '" + path + "' for writing");
    f << text;
    f.close();
    if (!f) fail(ErrorKind::IoError, "failed writing '" + path + "'");
}

int exit_code(const std::vector<Row>& rows) {
    for (const auto& r : rows) {
        if (!r.ok()) return 1;
    }
    return 0;
}

} // namespace zeno::cli
