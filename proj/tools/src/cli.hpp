#pragma once

#include <iosfwd>

namespace cmcert::cli {

enum ExitCode : int { kPass = 0, kVerificationFailure = 1, kUsageError = 2 };

/// Runs the command line with argv[0] as the program name. All output goes
/// to `out` and `err`; nothing touches the process streams.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cmcert::cli
