#pragma once

#include <iosfwd>

namespace segtrack::cli {

// Exit codes: 0 success, 1 domain or I/O failure, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs one invocation. Reports and other machine output go to `out` (or
// the files named by flags); diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace segtrack::cli
