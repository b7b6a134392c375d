#pragma once

#include <ostream>

namespace wright_poisson::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kSuccess = 0,
  kCheckFailed = 1,
  kBadInput = 2,
  kMethodDisagreement = 3,
  kNonConvergence = 4,
};

/// Runs the wright-poisson command line. Regular output goes to `out` unless
/// --out names a file; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wright_poisson::cli
