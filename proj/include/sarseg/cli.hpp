#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sarseg {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitNumeric = 3,
  kExitIo = 4,
};

/// Entry point of the sarseg command line. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sarseg
