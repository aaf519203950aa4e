#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "scp/lattice.hpp"
#include "scp/model.hpp"

namespace scp {

/// Lazily evaluated Harris graphical representation on a torus.
///
/// Every site carries one death clock (rate 1) and, for each of its 2d
/// outgoing edges, four arrow clocks (+1, -1, +2, -2) with rates
/// lambda_i p_i / 2d and lambda_i q_i / 2d. The arrival times of each clock
/// are a fixed function of (seed, clock id): time is cut into windows of
/// width 4/rate and the arrivals inside window k are generated from the
/// substream keyed by (clock id, k). Any set of processes that reads the
/// same (seed, params) therefore sees the same arrows and death marks.
///
/// Only clocks whose ring could change something are kept in the queue:
/// the caller reports, per site, whether it is occupied and whether it is
/// fertile of each type (in any of the processes it drives). Rings of
/// inactive clocks are no-ops, so skipping them leaves the dynamics intact.
/// Clocks of types with an infinite birth rate are never scheduled.
class EventScheduler {
 public:
  EventScheduler(std::shared_ptr<const Geometry> geometry, const ModelParams& params,
                 std::uint64_t seed);

  struct Activity {
    bool occupied = false;
    bool fertile1 = false;
    bool fertile2 = false;
  };

  static Activity activity_of(SiteState s) noexcept {
    return {is_occupied(s), s == SiteState::fertile1, s == SiteState::fertile2};
  }

  /// Turn the clocks of site x on or off as of time `now`. A clock that is
  /// switched on resumes at its first arrival strictly after `now`.
  void set_activity(SiteIndex x, Activity a, double now);
  void set_activity(SiteIndex x, SiteState s, double now) { set_activity(x, activity_of(s), now); }

  /// Time of the earliest pending ring, +inf if none.
  double peek_time() const noexcept;

  /// Removes and returns the earliest ring with time <= horizon, advancing
  /// that clock to its next arrival. Equal times resolve by clock id.
  std::optional<EventRecord> pop(double horizon);

  std::size_t active_clocks() const noexcept { return heap_.size(); }
  std::uint64_t rings() const noexcept { return rings_; }

  int clocks_per_site() const noexcept { return slots_; }
  double clock_rate(std::size_t clock) const noexcept { return slot_rate_[clock % slots_]; }
  EventRecord describe(std::size_t clock, double time) const noexcept;
  /// Clock id of the death mark at x (kind = death) or of the arrow of the
  /// given kind along edge `edge` out of x.
  std::size_t clock_id(SiteIndex x, EventKind kind, int edge = 0) const noexcept {
    const std::size_t base = x * static_cast<std::size_t>(slots_);
    if (kind == EventKind::death) return base;
    return base + 1 + static_cast<std::size_t>(static_cast<int>(kind) * degree_ + edge);
  }

  /// Arrival times of one clock in [t0, t1), independent of scheduling state.
  /// Used to inspect the graphical representation directly.
  std::vector<double> arrivals(std::size_t clock, double t0, double t1) const;

 private:
  struct Clock {
    double next = std::numeric_limits<double>::infinity();
    std::int64_t window = 0;
    std::uint32_t counter = 0;
    std::int32_t heap_pos = -1;
  };

  void activate(std::size_t clock, double now);
  void deactivate(std::size_t clock);
  /// Moves the clock to its first arrival strictly after `after`.
  void advance(std::size_t clock, Clock& c, double after) const;

  bool less(std::size_t a, std::size_t b) const noexcept {
    const double ta = clocks_[a].next, tb = clocks_[b].next;
    return ta < tb || (ta == tb && a < b);
  }
  void sift_up(std::size_t pos);
  void sift_down(std::size_t pos);
  void heap_remove(std::size_t pos);

  std::shared_ptr<const Geometry> geometry_;
  std::uint64_t seed_;
  int degree_;
  int slots_;
  std::vector<double> slot_rate_;
  std::vector<double> slot_width_;
  std::vector<Clock> clocks_;
  std::vector<std::size_t> heap_;
  std::uint64_t rings_ = 0;
};

}  // namespace scp
