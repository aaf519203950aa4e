#pragma once

#include <charconv>
#include <string>

namespace scp {

/// Shortest round-trip decimal form; output is locale-independent so files
/// written from the same inputs are byte-identical.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

}  // namespace scp
