#pragma once

#include <iosfwd>

namespace fluxkit {

enum ExitCode : int { kExitOk = 0, kExitAssertion = 1, kExitInconsistent = 2, kExitUsage = 3 };

/// Replays a query script, writing the transcript to `out` and diagnostics
/// to `err`. Returns one of the exit codes above.
int run_script(std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace fluxkit
