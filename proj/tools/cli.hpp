#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fraisse::cli {

inline constexpr const char* kToolVersion = "fraisse 1.0.0";

/// Exit statuses of every subcommand.
enum Exit : int { kHolds = 0, kFails = 1, kUsage = 2, kResource = 3 };

/// Runs one command line (without the program name) and returns its exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fraisse::cli
