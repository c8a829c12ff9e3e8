#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dccs/mlgraph.hpp"
#include "dccs/search.hpp"

namespace dccs::cli {

// Exit codes of the command-line front end.
constexpr int kOk = 0;
constexpr int kUsageError = 1;
constexpr int kTooLarge = 2;

// Runs one command line (args excludes the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "first:last:layers:p" with 1-based layers joined by commas, e.g. "0:20:1,3:0.9".
PlantedBlock parse_block(const std::string& text);

// Orders external ids numerically when both are unsigned integers, otherwise as strings,
// with numeric ids first.
bool external_less(const std::string& a, const std::string& b);

}  // namespace dccs::cli
