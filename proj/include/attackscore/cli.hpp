#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace attackscore {

// Exit codes: 0 ok, 1 domain error, 2 usage or I/O error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the `attackscore` command. `args` excludes the program name.
// Renderings go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace attackscore
