#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace smactr {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitParseFailure = 1,  // an artifact or repository file could not be read
  kExitFailed = 2,        // validation errors, failed gate, refused write
  kExitUsage = 3,
};

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smactr
