#include "scp/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "scp/errors.hpp"

namespace scp {

std::string_view state_token(SiteState s) noexcept {
  switch (s) {
    case SiteState::empty: return "0";
    case SiteState::fertile1: return "+1";
    case SiteState::sterile1: return "-1";
    case SiteState::fertile2: return "+2";
    case SiteState::sterile2: return "-2";
  }
  return "?";
}

SiteState parse_state_token(std::string_view token) {
  if (token == "0") return SiteState::empty;
  if (token == "+1" || token == "1") return SiteState::fertile1;
  if (token == "-1") return SiteState::sterile1;
  if (token == "+2" || token == "2") return SiteState::fertile2;
  if (token == "-2") return SiteState::sterile2;
  throw ConfigError("unknown site state '" + std::string(token) + "'");
}

Geometry::Geometry(std::vector<int> sides) : sides_(std::move(sides)) {
  if (sides_.empty()) throw ConfigError("torus needs at least one axis");
  size_ = 1;
  for (int s : sides_) {
    if (s < 3) throw ConfigError("torus side lengths must be >= 3");
    size_ *= static_cast<std::size_t>(s);
  }
  const int d = dim();
  strides_.assign(static_cast<std::size_t>(d), 1);
  for (int a = d - 2; a >= 0; --a) {
    strides_[a] = strides_[a + 1] * static_cast<std::size_t>(sides_[a + 1]);
  }

  table_.resize(size_ * static_cast<std::size_t>(degree()));
  for (SiteIndex x = 0; x < size_; ++x) {
    for (int a = 0; a < d; ++a) {
      const auto side = static_cast<std::size_t>(sides_[a]);
      const std::size_t c = (x / strides_[a]) % side;
      const std::size_t base = x - c * strides_[a];
      const std::size_t minus = (c + side - 1) % side;
      const std::size_t plus = (c + 1) % side;
      table_[x * degree() + 2 * a] = base + minus * strides_[a];
      table_[x * degree() + 2 * a + 1] = base + plus * strides_[a];
    }
  }
}

std::vector<int> Geometry::coords(SiteIndex x) const {
  std::vector<int> c(sides_.size());
  for (std::size_t a = 0; a < sides_.size(); ++a) {
    c[a] = static_cast<int>((x / strides_[a]) % static_cast<std::size_t>(sides_[a]));
  }
  return c;
}

SiteIndex Geometry::index(std::span<const int> coords) const {
  if (coords.size() != sides_.size()) throw ConfigError("coordinate dimension mismatch");
  SiteIndex x = 0;
  for (std::size_t a = 0; a < sides_.size(); ++a) {
    int c = coords[a] % sides_[a];
    if (c < 0) c += sides_[a];
    x += static_cast<std::size_t>(c) * strides_[a];
  }
  return x;
}

int Geometry::displacement(SiteIndex from, SiteIndex to, int axis) const {
  const auto side = static_cast<std::size_t>(sides_[axis]);
  const auto cf = static_cast<int>((from / strides_[axis]) % side);
  const auto ct = static_cast<int>((to / strides_[axis]) % side);
  const int s = sides_[axis];
  int delta = ct - cf;
  if (delta > s / 2) delta -= s;
  if (delta < -(s - 1) / 2) delta += s;
  return delta;
}

int Geometry::sup_distance(SiteIndex from, SiteIndex to) const {
  int best = 0;
  for (int a = 0; a < dim(); ++a) best = std::max(best, std::abs(displacement(from, to, a)));
  return best;
}

SiteIndex Geometry::center() const {
  std::vector<int> c(sides_.size());
  for (std::size_t a = 0; a < sides_.size(); ++a) c[a] = sides_[a] / 2;
  return index(c);
}

std::size_t Occupancy::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

Torus::Torus(std::vector<int> sides)
    : Torus(std::make_shared<const Geometry>(std::move(sides))) {}

Torus::Torus(std::shared_ptr<const Geometry> geometry)
    : geometry_(std::move(geometry)), cells_(geometry_->size(), SiteState::empty) {}

void Torus::fill(SiteState s) { std::fill(cells_.begin(), cells_.end(), s); }

bool Torus::operator==(const Torus& other) const noexcept {
  return *geometry_ == *other.geometry_ && cells_ == other.cells_;
}

double fertile_fraction(const Torus& t, SiteIndex x, int type) {
  const SiteState target = fertile_of(type);
  int count = 0;
  for (SiteIndex y : t.neighbors(x)) count += t.at(y) == target ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(t.geometry().degree());
}

Occupancy occupancy(const Torus& t) {
  Occupancy occ;
  for (SiteState s : t.cells()) ++occ.counts[state_slot(s)];
  return occ;
}

Torus translate(const Torus& t, std::span<const int> offset) {
  Torus out(t.shared_geometry());
  const Geometry& g = t.geometry();
  std::vector<int> c;
  for (SiteIndex x = 0; x < t.size(); ++x) {
    c = g.coords(x);
    for (std::size_t a = 0; a < c.size(); ++a) c[a] += offset[a];
    out.set(g.index(c), t.at(x));
  }
  return out;
}

}  // namespace scp
