#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polyton {

/// Exit codes of the polyton binary.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInvalid = 2;  // validation or capacity error; JSON on stderr
inline constexpr int kExitUsage = 64;

/// Whole command line including argv[0]. Results go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string version_string();

}  // namespace polyton
