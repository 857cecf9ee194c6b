#pragma once

#include "rkfd/integrate.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace rkfd::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kSuccess = 0, kFailure = 1, kUsage = 2 };

/// Builtin names: rkfd4, rkfd4-printed, rkfd5, rkfd5-printed, rk4.  Anything
/// else is read as a tableau file.  Throws std::invalid_argument or
/// ParseError when the selector cannot be resolved.
Method resolve_method(const std::string& selector);
std::vector<std::string> builtin_method_names();

/// p1..p5, poly0..poly3, or "all" (p1..p5).
std::vector<Ivp4> resolve_problems(const std::vector<std::string>& selectors);

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rkfd::cli
