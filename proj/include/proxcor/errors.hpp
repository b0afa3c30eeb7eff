#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace proxcor {

enum class ErrorKind {
    ConstantVector,
    DimensionTooSmall,
    DimensionMismatch,
    DegenerateCoplanar,
    InvalidDof,
    InvalidParams,
    QuadratureFailure,
    ApproximationBreakdown,
    TooFewRecords,
    EmptyBand,
    InfeasibleConfig,
    ParseError,
};

std::string_view to_string(ErrorKind kind);

// Numeric failures (as opposed to rejected input) map to a distinct CLI exit code.
inline bool is_numeric_failure(ErrorKind kind) {
    return kind == ErrorKind::QuadratureFailure || kind == ErrorKind::ApproximationBreakdown;
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace proxcor
