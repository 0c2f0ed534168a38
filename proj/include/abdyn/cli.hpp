#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace abdyn::cli {

/// Exit codes: 0 success, 1 other failures (including failed example claims),
/// 2 non-commuting generators, 3 numeric ambiguity.
enum ExitCode : int { Success = 0, Failure = 1, NotAbelianExit = 2, NumericAmbiguityExit = 3 };

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace abdyn::cli
