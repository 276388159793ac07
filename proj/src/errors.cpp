#include "zeno/errors.hpp"

namespace zeno {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid_argument";
        case ErrorKind::DistributionalKernel: return "distributional_kernel";
        case ErrorKind::NonUniformGrid: return "non_uniform_grid";
        case ErrorKind::DegenerateTrace: return "degenerate_trace";
        case ErrorKind::QuadratureNonConvergence: return "quadrature_nonconvergence";
        case ErrorKind::DomainError: return "domain_error";
        case ErrorKind::StepTooLarge: return "step_too_large";
        case ErrorKind::DimensionOverBudget: return "dimension_over_budget";
        case ErrorKind::WindowBeyondRecurrence: return "window_beyond_recurrence";
        case ErrorKind::IllConditionedFit: return "ill_conditioned_fit";
        case ErrorKind::NonstationaryDissipation: return "nonstationary_dissipation";
        case ErrorKind::VanishingDenominator: return "vanishing_denominator";
        case ErrorKind::ConfigError: return "config_error";
        case ErrorKind::IoError: return "io_error";
    }
    return "unknown";
}

} // namespace zeno
