#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>

namespace hierq::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInvalidInput = 1,     // parse, schema or validation failure
  kInfeasibleRepair = 2,
  kNumericFailure = 3,
};

/// Runs one command line; `args[0]` is the program name. `env_tolerance`
/// stands in for HIERQ_TOLERANCE so callers control the environment.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err,
        const std::optional<std::string>& env_tolerance = std::nullopt);

}  // namespace hierq::cli
