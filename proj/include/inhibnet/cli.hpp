#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace inhibnet::cli {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kRuntimeError = 3,
    kUsage = 64,
};

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace inhibnet::cli
