#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nwopt::cli {

enum ExitCode : int {
    kSuccess = 0,
    kAssertionFailed = 1,
    kUsageError = 2,
};

/// Entry point shared by the nwopt binary and the tests. args[0] is the
/// program name. Subcommands: estimate, solve, bandwidth, bound, complexity,
/// experiment, generate.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nwopt::cli
