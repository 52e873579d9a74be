#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hierq {

enum class ErrorCode {
  DimensionMismatch,
  NotHermitian,
  NotNormalized,
  NotPositive,
  IndexOutOfRange,
  InvalidArgument,
  TooLarge,
  NonFinite,
  LevelMismatch,
  EmptyParts,
  ShapeMismatch,
  ParseError,
  SchemaError,
  MalformedTree,
  EmptyRemainder,
  InfeasibleRebuild,
  UnsupportedDepth,
  NumericFailure,
};

std::string_view error_code_name(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so
// the CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hierq
