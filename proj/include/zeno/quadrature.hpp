// quadrature.hpp - Globally adaptive Gauss-Kronrod (7/15) integration over a
// list of breakpoints.

#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace zeno::quad {

struct Options {
    double rel_tol{1e-8};
    double abs_tol{0.0};
    std::size_t max_intervals{5000};
};

struct Result {
    double value{0.0};
    double error{0.0};
    std::size_t evaluations{0};
};

using Integrand = std::function<double(double)>;

// Integrates f over [points.front(), points.back()], never placing a node on an
// interior point. Throws QuadratureError when the interval budget runs out.
Result integrate(const Integrand& f, std::span<const double> points, const Options& opts = {});

Result integrate(const Integrand& f, double a, double b, const Options& opts = {});

} // namespace zeno::quad
