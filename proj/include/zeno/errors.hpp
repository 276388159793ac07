// errors.hpp - Error kinds shared by every zeno module

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace zeno {

enum class ErrorKind {
    InvalidArgument,
    DistributionalKernel,
    NonUniformGrid,
    DegenerateTrace,
    QuadratureNonConvergence,
    DomainError,
    StepTooLarge,
    DimensionOverBudget,
    WindowBeyondRecurrence,
    IllConditionedFit,
    NonstationaryDissipation,
    VanishingDenominator,
    ConfigError,
    IoError,
};

// snake_case name used in report status columns
std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::string_view status() const noexcept { return to_string(kind_); }

private:
    ErrorKind kind_;
};

// Quadrature failure keeps the last estimate so callers can report it.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double estimate, double error_bound)
        : Error(ErrorKind::QuadratureNonConvergence, what),
          estimate_(estimate), error_bound_(error_bound) {}

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

// Config errors carry the JSON path of the offending field.
class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& what)
        : Error(ErrorKind::ConfigError, path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorKind::InvalidArgument, what);
}

} // namespace zeno
