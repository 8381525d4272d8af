#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bullwhip::app {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kToleranceExceeded = 1,  ///< compare: some analytic/simulated gap too large
  kUsage = 2,              ///< bad flags, config, input file or parameters
};

/// Runs the command line `args` (program name excluded). Regular output
/// goes to `out` unless --out redirects it; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace bullwhip::app
