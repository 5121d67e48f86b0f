#pragma once

namespace rootstat {

/// Entry point of the command-line tool; returns the process exit code.
/// Exit codes: 0 success, 1 usage/config, 2 non-convergence,
/// 3 incomplete protocol, 4 I/O.
int run_app(int argc, const char* const* argv);

} // namespace rootstat
