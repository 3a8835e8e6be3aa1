#pragma once

#include <string>
#include <vector>

namespace propint::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;

struct CommandResult {
  int exit_code = kExitOk;
  /// Rendered output; empty when it was written to --output instead.
  std::string stdout_payload;
  std::string stderr_payload;
};

/// Runs one command line (without the program name). Never throws.
CommandResult execute(const std::vector<std::string>& args);

}  // namespace propint::cli
