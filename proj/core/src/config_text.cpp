#include "scp/config_text.hpp"

#include <charconv>
#include <sstream>

#include "scp/errors.hpp"
#include "scp/rng.hpp"

namespace scp {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_double(std::string_view s) {
  s = trim(s);
  std::string tmp(s);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(tmp, &used);
  } catch (const std::exception&) {
    throw ConfigError("bad number '" + tmp + "'");
  }
  if (used != tmp.size()) throw ConfigError("bad number '" + tmp + "'");
  return v;
}

std::array<double, 4> parse_product_args(std::string_view body) {
  std::array<double, 4> out{};
  std::size_t k = 0;
  while (true) {
    const auto comma = body.find(',');
    if (k >= 4) throw ConfigError("product(...) takes exactly four densities");
    out[k++] = parse_double(body.substr(0, comma));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  if (k != 4) throw ConfigError("product(...) takes exactly four densities");
  return out;
}

}  // namespace

Torus product_measure(const std::shared_ptr<const Geometry>& geometry,
                      const std::array<double, 4>& densities, std::uint64_t seed) {
  double total = 0;
  for (double p : densities) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("product densities must lie in [0,1]");
    total += p;
  }
  if (total > 1.0 + 1e-12) throw ConfigError("product densities must sum to at most 1");
  constexpr std::array<SiteState, 4> order{SiteState::fertile1, SiteState::sterile1,
                                           SiteState::fertile2, SiteState::sterile2};
  Torus t(geometry);
  for (SiteIndex x = 0; x < t.size(); ++x) {
    CounterRng rng(seed, stream_key(StreamDomain::initial, x));
    double u = rng.uniform();
    for (std::size_t k = 0; k < 4; ++k) {
      if (u < densities[k]) {
        t.set(x, order[k]);
        break;
      }
      u -= densities[k];
    }
  }
  return t;
}

Torus parse_config(std::string_view literal, const std::shared_ptr<const Geometry>& geometry,
                   std::uint64_t seed) {
  std::vector<std::string_view> items;
  std::string_view rest = literal;
  while (!rest.empty()) {
    const auto nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.starts_with("product(")) {
      items.push_back(line);
      continue;
    }
    // Split a line on commas and whitespace into runs.
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ',' || line[i] == ' ' || line[i] == '\t')) ++i;
      std::size_t j = i;
      while (j < line.size() && line[j] != ',' && line[j] != ' ' && line[j] != '\t') ++j;
      if (j > i) items.push_back(line.substr(i, j - i));
      i = j;
    }
  }
  if (items.empty()) throw ConfigError("empty configuration literal");

  if (items.size() == 1) {
    const std::string_view item = items.front();
    if (item == "all-empty") return Torus(geometry);
    if (item == "single-fertile-1@center" || item == "single-fertile-2@center") {
      Torus t(geometry);
      t.set(geometry->center(), item[15] == '1' ? SiteState::fertile1 : SiteState::fertile2);
      return t;
    }
    if (item.starts_with("product(")) {
      if (!item.ends_with(")")) throw ConfigError("unterminated product(...)");
      const auto body = item.substr(8, item.size() - 9);
      return product_measure(geometry, parse_product_args(body), seed);
    }
  }

  Torus t(geometry);
  std::size_t pos = 0;
  for (std::string_view item : items) {
    const auto star = item.find('*');
    const SiteState s = parse_state_token(item.substr(0, star));
    std::size_t count = 1;
    if (star != std::string_view::npos) {
      const auto digits = item.substr(star + 1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), count);
      if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
        throw ConfigError("bad run length in '" + std::string(item) + "'");
      }
    }
    if (pos + count > t.size()) throw ConfigError("configuration literal has too many sites");
    for (std::size_t k = 0; k < count; ++k) t.set(pos++, s);
  }
  if (pos != t.size()) {
    throw ConfigError("configuration literal covers " + std::to_string(pos) + " of " +
                      std::to_string(t.size()) + " sites");
  }
  return t;
}

std::string format_config(const Torus& t) {
  std::ostringstream out;
  std::size_t i = 0;
  const auto cells = t.cells();
  while (i < cells.size()) {
    std::size_t j = i;
    while (j < cells.size() && cells[j] == cells[i]) ++j;
    out << state_token(cells[i]) << '*' << (j - i) << '\n';
    i = j;
  }
  return out.str();
}

std::string pack_config(const Torus& t) {
  std::string out;
  out.reserve(t.size());
  for (SiteState s : t.cells()) {
    switch (s) {
      case SiteState::empty: out.push_back('0'); break;
      case SiteState::fertile1: out.push_back('A'); break;
      case SiteState::sterile1: out.push_back('a'); break;
      case SiteState::fertile2: out.push_back('B'); break;
      case SiteState::sterile2: out.push_back('b'); break;
    }
  }
  return out;
}

Torus unpack_config(std::string_view packed, const std::shared_ptr<const Geometry>& geometry) {
  Torus t(geometry);
  if (packed.size() != t.size()) throw ConfigError("packed configuration has wrong length");
  for (std::size_t x = 0; x < packed.size(); ++x) {
    switch (packed[x]) {
      case '0': t.set(x, SiteState::empty); break;
      case 'A': t.set(x, SiteState::fertile1); break;
      case 'a': t.set(x, SiteState::sterile1); break;
      case 'B': t.set(x, SiteState::fertile2); break;
      case 'b': t.set(x, SiteState::sterile2); break;
      default: throw ConfigError("bad packed state character");
    }
  }
  return t;
}

}  // namespace scp
