#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scp {

enum class SiteState : std::int8_t {
  empty = 0,
  fertile1 = 1,
  sterile1 = -1,
  fertile2 = 2,
  sterile2 = -2,
};

constexpr bool is_occupied(SiteState s) noexcept { return s != SiteState::empty; }

constexpr bool is_fertile(SiteState s) noexcept {
  return s == SiteState::fertile1 || s == SiteState::fertile2;
}

/// 1 or 2 for occupied states, 0 for empty.
constexpr int type_of(SiteState s) noexcept {
  const int v = static_cast<int>(s);
  return v < 0 ? -v : v;
}

constexpr SiteState fertile_of(int type) noexcept {
  return type == 1 ? SiteState::fertile1 : SiteState::fertile2;
}

constexpr SiteState sterile_of(int type) noexcept {
  return type == 1 ? SiteState::sterile1 : SiteState::sterile2;
}

/// Position of a state in Occupancy::counts: (0, +1, -1, +2, -2).
constexpr std::size_t state_slot(SiteState s) noexcept {
  switch (s) {
    case SiteState::empty: return 0;
    case SiteState::fertile1: return 1;
    case SiteState::sterile1: return 2;
    case SiteState::fertile2: return 3;
    case SiteState::sterile2: return 4;
  }
  return 0;
}

inline constexpr std::array<SiteState, 5> kAllStates{
    SiteState::empty, SiteState::fertile1, SiteState::sterile1, SiteState::fertile2,
    SiteState::sterile2};

std::string_view state_token(SiteState s) noexcept;  // "0", "+1", "-1", "+2", "-2"
SiteState parse_state_token(std::string_view token);

using SiteIndex = std::size_t;

/// Periodic box Z_{s_1} x ... x Z_{s_d}, row-major (last axis fastest).
/// Neighbors of x are listed axis by axis, minus direction first.
class Geometry {
 public:
  explicit Geometry(std::vector<int> sides);

  int dim() const noexcept { return static_cast<int>(sides_.size()); }
  int degree() const noexcept { return 2 * dim(); }
  const std::vector<int>& sides() const noexcept { return sides_; }
  std::size_t size() const noexcept { return size_; }

  std::span<const SiteIndex> neighbors(SiteIndex x) const noexcept {
    return {table_.data() + x * static_cast<std::size_t>(degree()),
            static_cast<std::size_t>(degree())};
  }
  SiteIndex neighbor(SiteIndex x, int edge) const noexcept {
    return table_[x * static_cast<std::size_t>(degree()) + static_cast<std::size_t>(edge)];
  }

  std::vector<int> coords(SiteIndex x) const;
  /// Coordinates are reduced modulo the side lengths.
  SiteIndex index(std::span<const int> coords) const;

  /// Signed minimum-image displacement to - from along one axis.
  int displacement(SiteIndex from, SiteIndex to, int axis) const;
  /// Sup-norm of the minimum-image displacement.
  int sup_distance(SiteIndex from, SiteIndex to) const;

  /// Site with coordinates side/2 on every axis.
  SiteIndex center() const;

  bool operator==(const Geometry& other) const noexcept { return sides_ == other.sides_; }

 private:
  std::vector<int> sides_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
  std::vector<SiteIndex> table_;
};

struct Occupancy {
  std::array<std::size_t, 5> counts{};  // (0, +1, -1, +2, -2)

  std::size_t operator[](SiteState s) const noexcept { return counts[state_slot(s)]; }
  std::size_t total() const noexcept;
  std::size_t occupied() const noexcept { return total() - counts[0]; }
  std::size_t fertile() const noexcept { return counts[1] + counts[3]; }
  std::size_t of_type(int type) const noexcept {
    return type == 1 ? counts[1] + counts[2] : counts[3] + counts[4];
  }
  bool operator==(const Occupancy&) const = default;
};

/// A configuration on a torus. Geometry is shared between copies.
class Torus {
 public:
  explicit Torus(std::vector<int> sides);
  explicit Torus(std::shared_ptr<const Geometry> geometry);

  const Geometry& geometry() const noexcept { return *geometry_; }
  const std::shared_ptr<const Geometry>& shared_geometry() const noexcept { return geometry_; }
  int dim() const noexcept { return geometry_->dim(); }
  std::size_t size() const noexcept { return cells_.size(); }

  SiteState at(SiteIndex x) const noexcept { return cells_[x]; }
  void set(SiteIndex x, SiteState s) noexcept { cells_[x] = s; }
  std::span<const SiteState> cells() const noexcept { return cells_; }
  std::span<const SiteIndex> neighbors(SiteIndex x) const noexcept {
    return geometry_->neighbors(x);
  }

  void fill(SiteState s);

  bool operator==(const Torus& other) const noexcept;

 private:
  std::shared_ptr<const Geometry> geometry_;
  std::vector<SiteState> cells_;
};

/// Fraction of the 2d neighbors of x that are fertile of the given type.
double fertile_fraction(const Torus& t, SiteIndex x, int type);

Occupancy occupancy(const Torus& t);

/// Cyclic shift of the configuration by the given offset vector.
Torus translate(const Torus& t, std::span<const int> offset);

}  // namespace scp
