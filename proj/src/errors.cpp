#include "proxcor/errors.hpp"

namespace proxcor {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ConstantVector: return "ConstantVector";
    case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DegenerateCoplanar: return "DegenerateCoplanar";
    case ErrorKind::InvalidDof: return "InvalidDof";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::ApproximationBreakdown: return "ApproximationBreakdown";
    case ErrorKind::TooFewRecords: return "TooFewRecords";
    case ErrorKind::EmptyBand: return "EmptyBand";
    case ErrorKind::InfeasibleConfig: return "InfeasibleConfig";
    case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

} // namespace proxcor
