#include "scp/trajectory.hpp"

#include <ostream>

#include "scp/config_text.hpp"
#include "scp/errors.hpp"
#include "scp/format.hpp"

namespace scp {

TrajectoryRecorder::TrajectoryRecorder(const RunOptions& options, const Torus& initial,
                                       double horizon, std::uint64_t seed)
    : options_(options), current_(occupancy(initial)), next_sample_(0.0) {
  traj_.seed = seed;
  traj_.horizon = horizon;
  traj_.initial = initial;
  traj_.events_recorded = options.record_events;
  if (current_.fertile() == 0) traj_.fertile_extinction_time = 0.0;
  if (current_.occupied() == 0) traj_.extinction_time = 0.0;
}

void TrajectoryRecorder::emit(double t, const Torus& cfg) {
  traj_.samples.push_back({t, current_});
  if (options_.keep_snapshots) traj_.snapshots.push_back(cfg);
}

void TrajectoryRecorder::advance_to(double time, const Torus& cfg) {
  while (next_sample_ < time && next_sample_ <= traj_.horizon) {
    emit(next_sample_, cfg);
    if (options_.sample_interval > 0) {
      ++sample_index_;
      next_sample_ = static_cast<double>(sample_index_) * options_.sample_interval;
      if (next_sample_ > traj_.horizon && traj_.samples.back().time < traj_.horizon) {
        next_sample_ = traj_.horizon;
      }
    } else {
      next_sample_ = traj_.samples.size() == 1 ? traj_.horizon
                                               : std::numeric_limits<double>::infinity();
    }
  }
}

void TrajectoryRecorder::on_applied(const EventRecord& ev, SiteState before, SiteState after) {
  --current_.counts[state_slot(before)];
  ++current_.counts[state_slot(after)];
  ++traj_.applied_events;
  if (ev.kind == EventKind::death) {
    ++traj_.deaths;
  } else {
    ++traj_.births[state_slot(after)];
  }
  if (!traj_.fertile_extinction_time && current_.fertile() == 0) {
    traj_.fertile_extinction_time = ev.time;
  }
  if (!traj_.extinction_time && current_.occupied() == 0) traj_.extinction_time = ev.time;
  if (options_.record_events) traj_.events.push_back(ev);
  if (options_.on_event) options_.on_event(ev, before, after);
}

Trajectory TrajectoryRecorder::finish(const Torus& cfg, double end_time) {
  if (end_time < traj_.horizon) traj_.horizon = end_time;
  advance_to(std::nextafter(traj_.horizon, std::numeric_limits<double>::infinity()), cfg);
  if (traj_.samples.empty() || traj_.samples.back().time < traj_.horizon) {
    emit(traj_.horizon, cfg);
  }
  traj_.terminal = cfg;
  return std::move(traj_);
}

Torus snapshot(const Trajectory& traj, double t) {
  if (!(t >= 0.0 && t <= traj.horizon)) {
    throw ConfigError("snapshot time " + format_double(t) + " outside [0, " +
                      format_double(traj.horizon) + "]");
  }
  if (traj.events_recorded) {
    Torus cfg = traj.initial;
    for (const EventRecord& ev : traj.events) {
      if (ev.time > t) break;
      // Logged events are the applied ones; cascade fills and Gillespie
      // births are logged as the arrow that produced them.
      apply_event(cfg, ev);
    }
    return cfg;
  }
  if (t == 0.0) return traj.initial;
  if (t == traj.horizon) return traj.terminal;
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    if (traj.samples[k].time == t) return traj.snapshots[k];
  }
  throw ConfigError("no snapshot stored at t=" + format_double(t) +
                    " (record events or keep snapshots)");
}

void write_ndjson(std::ostream& out, const Trajectory& traj, bool include_config) {
  if (include_config && traj.snapshots.size() != traj.samples.size()) {
    throw ConfigError("trajectory has no stored snapshots to export");
  }
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    const Sample& s = traj.samples[k];
    out << "{\"t\":" << format_double(s.time) << ",\"counts\":[";
    for (std::size_t i = 0; i < s.counts.counts.size(); ++i) {
      if (i) out << ',';
      out << s.counts.counts[i];
    }
    out << ']';
    if (include_config) out << ",\"config\":\"" << pack_config(traj.snapshots[k]) << '"';
    out << "}\n";
  }
}

}  // namespace scp
