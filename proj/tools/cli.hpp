#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bdpr::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kNumerical = 2,
  kIo = 3,
};

/// Environment variable holding the default `phase --jobs` value.
inline constexpr const char* kJobsEnv = "BDPR_JOBS";

/// Runs one command line (without the program name), writing normal output
/// to `out` and a single diagnostic line per error to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bdpr::cli
