#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace apollo {

enum ExitCode { kExitOk = 0, kExitFailure = 1, kExitUsage = 2, kExitPrecondition = 3, kExitResource = 4 };

// Runs the apollon command line (args exclude the program name). Normal
// output goes to out, diagnostics to err.
int run_cli(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);

}  // namespace apollo
