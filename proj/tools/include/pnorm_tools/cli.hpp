#pragma once

#include <iosfwd>

namespace pnorm::cli {

enum ExitCode : int { kOk = 0, kViolation = 1, kUsage = 2 };

// Entry point of the `pnorm` tool. Writes results to `out` (or --out) and
// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pnorm::cli
