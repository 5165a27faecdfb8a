#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pellab::cli {

// Default seed threaded through every sampling command.
constexpr unsigned long long kDefaultSeed = 20250101ULL;

// Dispatches one subcommand. Exit codes: 0 success, 1 a verified property
// was found violated, 2 input/usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pellab::cli
