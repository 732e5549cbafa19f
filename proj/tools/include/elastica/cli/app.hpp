#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace elastica::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInternalError = 1,
    kConfigError = 2,
    kNumericalError = 3,
    kVerificationFailed = 4,
};

/// Runs the tool on `args` (without the program name). Results go to files under
/// --out; `out` receives a short summary and `err` any diagnostics.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace elastica::cli
