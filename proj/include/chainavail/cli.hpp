#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chainavail {

// Exit codes: 0 success, 2 configuration error, 3 model error, 4 infeasible
// optimization target.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitModelError = 3;
inline constexpr int kExitInfeasible = 4;

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv);

}  // namespace chainavail
