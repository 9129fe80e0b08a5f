#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace taglex {

/// Exit codes of the `taglex` command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace taglex
