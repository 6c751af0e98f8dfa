#pragma once

// Command-line front end: unify, check-mgiu, replay, search, run, selftest.

#include <ostream>
#include <string>
#include <vector>

namespace dps {

enum ExitStatus : int { ExitOk = 0, ExitNegative = 1, ExitUsage = 2, ExitFailure = 3 };

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dps
