#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace simplab::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kGuardViolation = 2,
    kConsistencyFailure = 3,
};

/// Runs one command line (args[0] is the program name). Normal output goes to
/// `out`, diagnostics to `err`; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace simplab::cli
