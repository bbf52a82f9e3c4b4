#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace levilab {

// Exit codes: 0 analysis completed, 1 property violated / counterexample
// found, 2 usage error, 3 numeric failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace levilab
