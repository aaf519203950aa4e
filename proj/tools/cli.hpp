#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace scp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitInvariant = 3;

// argv[0] is the program name. Messages go to `err`, short summaries to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scp::cli
