#pragma once

#include <iosfwd>

namespace ffd::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInvalidInput = 2,
  kInternal = 3,
  kMismatch = 4,
};

/// Runs one command line. Output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ffd::cli
