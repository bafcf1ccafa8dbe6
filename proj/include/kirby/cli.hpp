#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kirby {

/// Exit codes of the `kirby` binary.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct NRange
{
    int lo = 0;
    int hi = 0;
};

/// "7" or "2..30". Errors: InvalidParameter.
[[nodiscard]] NRange parse_n_range(const std::string& text);

/// Runs the command line `args` (without the program name).
[[nodiscard]] int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kirby
