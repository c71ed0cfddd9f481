#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace optoring::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitUnstable = 2;

/// Entry point of the `optoring` tool. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace optoring::cli
