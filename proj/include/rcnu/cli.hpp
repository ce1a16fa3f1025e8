#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rcnu {

// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitDeviation = 1, kExitInput = 2, kExitBudget = 3 };

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rcnu
