#pragma once

#include <ostream>

namespace xweb {

/// Exit codes of the xweb command.
enum ExitCode : int { kExitOk = 0, kExitParameter = 1, kExitRuntime = 2, kExitMismatch = 3 };

/// Entry point of the xweb command, callable in-process.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace xweb
