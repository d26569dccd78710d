#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace apcharge {

// Exit codes of run_command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

// args excludes the program name. Output goes to out (or the --out file),
// diagnostics and usage text to err.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace apcharge
