#pragma once

#include <iosfwd>

namespace bfd::cli {

// Process exit codes. Each failing stage has its own code.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,  // bad flags or config
  kExtractFailed = 3,
  kTrainFailed = 4,
  kTuneFailed = 5,
  kBenchmarkFailed = 6,
  kEvaluateFailed = 7,
};

/// Entry point shared by the binary and the tests. Progress lines go to
/// `out`, diagnostics ("error [stage]: message") to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bfd::cli
