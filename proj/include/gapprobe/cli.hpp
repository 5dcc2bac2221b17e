#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gapprobe {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitNumerical = 2,
  kExitPartial = 3,
  kExitSimulation = 5,
  kExitUsage = 64,
};

// Runs gap-probe with `args` (program name excluded) and returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gapprobe
