#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gradsum::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kTypeError = 1;
inline constexpr int kParseError = 2;
inline constexpr int kMatchfail = 3;
inline constexpr int kBudget = 4;
inline constexpr int kUsage = 64;

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gradsum::cli
