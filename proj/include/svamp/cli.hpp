#pragma once

#include <iosfwd>

namespace svamp::cli {

enum ExitCode : int { ok = 0, computation_error = 1, usage_error = 2 };

/// Parses arguments, runs one subcommand and writes its artifact. Returns 0 on
/// success, 1 when a computation precondition fails, 2 on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace svamp::cli
