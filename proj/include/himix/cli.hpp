#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace himix {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Run the command line (args[0] is the program name). Usage errors print
/// help to `err` and return 1; data errors return 2.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace himix
