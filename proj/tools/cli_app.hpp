#pragma once

#include <iosfwd>

namespace fpot::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kInputError = 2,
  kNumericError = 3,
  kInconclusive = 4,
  kSingularH = 5,
};

/// Runs the command line. Results go to `out` (or the --out file), diagnostics
/// to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fpot::cli
