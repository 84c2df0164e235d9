#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dirac {

/// Exit codes of the dirac-reduce tool.
enum ExitCode : int {
  kExitPass = 0,
  kExitFailure = 1,   // a mathematical check failed
  kExitInput = 2,     // unreadable or invalid input, bad flags
  kExitInternal = 3,  // internal consistency error
};

/// Entry point behind main(); args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dirac
