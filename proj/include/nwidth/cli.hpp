#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nwidth::cli {

enum ExitCode : int { Ok = 0, InvalidArgs = 1, VerificationFailure = 2 };

// Runs one command line (without the program name) and returns its exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nwidth::cli
