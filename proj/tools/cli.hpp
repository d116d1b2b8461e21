#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace soupdiv::cli {

enum ExitCode : int {
  kSuccess = 0,
  kNegative = 1,  // negative or unknown result
  kUsage = 2,     // usage or domain error
};

/// Runs one subcommand. `args` excludes the program name. Results go to
/// `out` (or the --out file); diagnostics go to `err` as a single line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace soupdiv::cli
