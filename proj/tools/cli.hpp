#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nsub::cli {

enum ExitCode { kOk = 0, kUsage = 1, kVerificationFailed = 2 };

/// Runs one command line (args[0] is the program name). Reports go to `out`,
/// diagnostics to `err`, and files to --out when given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nsub::cli
