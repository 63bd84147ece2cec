#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bo {

// Dispatches one subcommand; args excludes the program name.
// Exit codes: 0 ok, 1 invalid input, 2 numerical failure, 3 property violation.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bo
