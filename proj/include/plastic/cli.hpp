#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace plastic::cli {

enum ExitCode
{
  Success = 0,
  Usage = 1,        // bad flags, unreadable or malformed input
  Precondition = 2, // non-primitive substitution, non-contracting length change
  NoConvergence = 3,
  Internal = 4,
};

/// Runs one subcommand. Data goes to `out` (or --out), diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace plastic::cli
