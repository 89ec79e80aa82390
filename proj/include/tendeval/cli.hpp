#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tendeval {

enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitCompute = 2 };

/// Runs the `tendeval` command line. `args` excludes the program name.
/// Report paths go to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace tendeval
