#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

#include "scp/lattice.hpp"

namespace scp {

inline constexpr double kInfiniteRate = std::numeric_limits<double>::infinity();

/// Birth rates and fertility probabilities of the two types. Death rate is 1.
struct ModelParams {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double p1 = 1.0;
  double p2 = 1.0;

  double lambda(int type) const noexcept { return type == 1 ? lambda1 : lambda2; }
  double p(int type) const noexcept { return type == 1 ? p1 : p2; }
  double q(int type) const noexcept { return 1.0 - p(type); }
  bool infinite(int type) const noexcept { return std::isinf(lambda(type)); }
  bool any_infinite() const noexcept { return infinite(1) || infinite(2); }

  /// Throws ConfigError unless rates are >= 0 (infinite only if allowed)
  /// and probabilities lie in [0,1].
  void validate(bool allow_infinite) const;
};

/// Alphabet of the graphical representation: four arrow kinds and a death mark.
enum class EventKind : std::uint8_t {
  arrow_fertile1 = 0,
  arrow_sterile1 = 1,
  arrow_fertile2 = 2,
  arrow_sterile2 = 3,
  death = 4,
};

constexpr EventKind arrow_kind(int type, bool fertile) noexcept {
  return static_cast<EventKind>(2 * (type - 1) + (fertile ? 0 : 1));
}

constexpr bool is_arrow(EventKind k) noexcept { return k != EventKind::death; }

/// Type of the individual that must sit at the tail for the arrow to act.
constexpr int arrow_type(EventKind k) noexcept { return static_cast<int>(k) / 2 + 1; }

constexpr SiteState arrow_offspring(EventKind k) noexcept {
  switch (k) {
    case EventKind::arrow_fertile1: return SiteState::fertile1;
    case EventKind::arrow_sterile1: return SiteState::sterile1;
    case EventKind::arrow_fertile2: return SiteState::fertile2;
    case EventKind::arrow_sterile2: return SiteState::sterile2;
    case EventKind::death: break;
  }
  return SiteState::empty;
}

const char* event_kind_name(EventKind k) noexcept;

struct EventRecord {
  double time = 0.0;
  EventKind kind = EventKind::death;
  SiteIndex from = 0;  // tail of an arrow; equals `to` for deaths
  SiteIndex to = 0;

  bool operator==(const EventRecord&) const = default;
};

/// Arrow(+-i): the head becomes the offspring state iff the tail is +i and
/// the head is empty. Death: the site empties. Returns whether anything changed.
inline bool apply_event(Torus& cfg, const EventRecord& ev) noexcept {
  if (ev.kind == EventKind::death) {
    if (!is_occupied(cfg.at(ev.to))) return false;
    cfg.set(ev.to, SiteState::empty);
    return true;
  }
  if (cfg.at(ev.from) != fertile_of(arrow_type(ev.kind))) return false;
  if (cfg.at(ev.to) != SiteState::empty) return false;
  cfg.set(ev.to, arrow_offspring(ev.kind));
  return true;
}

/// Value form of apply_event.
inline Torus step_graphical(Torus cfg, const EventRecord& ev) {
  apply_event(cfg, ev);
  return cfg;
}

}  // namespace scp
