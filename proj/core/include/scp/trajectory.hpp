#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "scp/lattice.hpp"
#include "scp/model.hpp"

namespace scp {

struct Sample {
  double time = 0.0;
  Occupancy counts;
};

struct Trajectory {
  std::uint64_t seed = 0;
  double horizon = 0.0;
  Torus initial{std::vector<int>{3}};
  Torus terminal{std::vector<int>{3}};
  std::vector<Sample> samples;
  /// Aligned with `samples` when snapshots were kept.
  std::vector<Torus> snapshots;
  /// Applied (state-changing) events, when recorded.
  std::vector<EventRecord> events;
  bool events_recorded = false;

  std::uint64_t applied_events = 0;
  std::uint64_t rings = 0;
  /// Successful births per offspring state slot (index 0 unused).
  std::array<std::uint64_t, 5> births{};
  std::uint64_t deaths = 0;
  /// First time the fertile population hit zero, if it did.
  std::optional<double> fertile_extinction_time;
  /// First time the configuration became all-empty, if it did.
  std::optional<double> extinction_time;
};

using EventObserver = std::function<void(const EventRecord&, SiteState before, SiteState after)>;

struct RunOptions {
  /// Occupancy is sampled at 0, dt, 2dt, ... and at the horizon. 0 samples
  /// only the endpoints.
  double sample_interval = 0.0;
  bool keep_snapshots = false;
  bool record_events = false;
  /// Stop after this many clock rings (0 = unlimited). The terminal sample
  /// is then taken at the time of the last ring.
  std::uint64_t max_rings = 0;
  /// Called after every applied event.
  EventObserver on_event;
};

/// Bookkeeping shared by the simulators: samples, counters, event log.
class TrajectoryRecorder {
 public:
  TrajectoryRecorder(const RunOptions& options, const Torus& initial, double horizon,
                     std::uint64_t seed);

  /// Emit all sample points strictly before `time`.
  void advance_to(double time, const Torus& cfg);
  void on_applied(const EventRecord& ev, SiteState before, SiteState after);
  /// Emit the remaining samples up to `end_time` and close the trajectory.
  Trajectory finish(const Torus& cfg, double end_time);

  const Occupancy& current() const noexcept { return current_; }

 private:
  void emit(double t, const Torus& cfg);

  const RunOptions& options_;
  Trajectory traj_;
  Occupancy current_;
  double next_sample_;
  std::size_t sample_index_ = 0;
};

/// Configuration at time t: replays the event log when present, otherwise
/// returns a stored snapshot taken exactly at t. Throws ConfigError when t
/// lies outside [0, horizon] or is not recoverable.
Torus snapshot(const Trajectory& traj, double t);

/// One NDJSON line per sample: {"t":..,"counts":[..],"config":".."}.
void write_ndjson(std::ostream& out, const Trajectory& traj, bool include_config);

}  // namespace scp
