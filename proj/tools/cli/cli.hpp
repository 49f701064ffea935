#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nlsg::cli {

enum ExitCode : int { kOk = 0, kVerificationFailure = 1, kUsageError = 2 };

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nlsg::cli
