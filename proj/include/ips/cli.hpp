#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ips {

// Command-line front end; args exclude the program name. Exit codes: 0 ok,
// 1 config or usage error, 2 runtime error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ips
