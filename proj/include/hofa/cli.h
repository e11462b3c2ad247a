#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hofa {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 2;
inline constexpr int kExitCheckFailed = 3;

// args excludes the program name. Primary output goes to `out` (or --out),
// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hofa
