#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wcf {

/// Exit statuses of the wcflab command line.
enum ExitCode : int {
  kExitOk = 0,
  kExitInvalid = 1,         // usage, parse and validation errors
  kExitBoundViolation = 2,  // verify found a fair protocol with P_A * P_B < 1/2
};

/// Runs one wcflab invocation. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wcf
