#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace commonsys::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kVerificationFailure = 3, kSizeCap = 4 };

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics to `err`; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace commonsys::cli
