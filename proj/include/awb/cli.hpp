#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace awb::cli {

enum ExitCode : int { kOk = 0, kMathFail = 1, kUsage = 2, kResource = 3 };

/// Runs one command. args excludes the program name. The JSON artifact goes to out
/// (or to --out, written atomically); diagnostics go to err.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace awb::cli
