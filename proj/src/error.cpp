#include "hierq/error.hpp"

namespace hierq {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::LevelMismatch: return "LevelMismatch";
    case ErrorCode::EmptyParts: return "EmptyParts";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::MalformedTree: return "MalformedTree";
    case ErrorCode::EmptyRemainder: return "EmptyRemainder";
    case ErrorCode::InfeasibleRebuild: return "InfeasibleRebuild";
    case ErrorCode::UnsupportedDepth: return "UnsupportedDepth";
    case ErrorCode::NumericFailure: return "NumericFailure";
  }
  return "Unknown";
}

}  // namespace hierq
