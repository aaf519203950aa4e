#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace scp {

/// Environment variable that overrides every seed given in a config file or
/// on the command line.
inline constexpr const char* kSeedEnv = "SCP_SEED";

/// Flat `key = value` settings. Blank lines and `#` comments are ignored;
/// keys may not repeat.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text, const std::string& origin = "<text>");
  static KeyValueConfig from_file(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated list of numbers.
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<int> get_ints(const std::string& key, const std::vector<int>& fallback) const;

  /// Throws ConfigError naming the first key outside `known`.
  void require_known(const std::set<std::string>& known) const;

  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
  std::string origin_;
};

/// Parses a double; accepts "inf"/"infinity". Throws ConfigError naming `what`.
double parse_double(const std::string& text, const std::string& what);
std::uint64_t parse_u64(const std::string& text, const std::string& what);

/// Seed from SCP_SEED when set (and valid), otherwise `fallback`.
std::uint64_t effective_seed(std::uint64_t fallback);
/// The override itself, if present. Throws ConfigError on a malformed value.
std::optional<std::uint64_t> seed_override();

}  // namespace scp
