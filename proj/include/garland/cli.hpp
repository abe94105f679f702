#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace garland::cli {

inline constexpr const char* kToolVersion = "garland 1.0.0";

/// Exit codes: 0 all expectations met, 2 usage or input error, 10 an
/// identity diverges from its expected verdict (reported), 1 internal failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDiverges = 10;

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace garland::cli
