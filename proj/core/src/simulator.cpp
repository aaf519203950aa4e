#include "scp/simulator.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "scp/errors.hpp"
#include "scp/event_scheduler.hpp"
#include "scp/rng.hpp"

namespace scp {

void ModelParams::validate(bool allow_infinite) const {
  for (int type : {1, 2}) {
    const double l = lambda(type);
    if (std::isnan(l) || l < 0) {
      throw ConfigError("lambda" + std::to_string(type) + " must be >= 0");
    }
    if (std::isinf(l) && !allow_infinite) {
      throw ConfigError("lambda" + std::to_string(type) +
                        " = inf requires the infinite-rate simulator");
    }
    const double pi = p(type);
    if (!(pi >= 0.0 && pi <= 1.0)) {
      throw ConfigError("p" + std::to_string(type) + " must lie in [0,1]");
    }
  }
}

const char* event_kind_name(EventKind k) noexcept {
  switch (k) {
    case EventKind::arrow_fertile1: return "arrow+1";
    case EventKind::arrow_sterile1: return "arrow-1";
    case EventKind::arrow_fertile2: return "arrow+2";
    case EventKind::arrow_sterile2: return "arrow-2";
    case EventKind::death: return "death";
  }
  return "?";
}

namespace {

void check_horizon(double horizon) {
  if (!(horizon > 0.0) || std::isinf(horizon)) {
    throw ConfigError("horizon must be a positive finite time");
  }
}

/// O(1) insert/erase/uniform pick over site indices.
class SiteSet {
 public:
  explicit SiteSet(std::size_t n) : pos_(n, -1) {}
  void insert(SiteIndex x) {
    if (pos_[x] >= 0) return;
    pos_[x] = static_cast<std::int64_t>(items_.size());
    items_.push_back(x);
  }
  void erase(SiteIndex x) {
    const std::int64_t p = pos_[x];
    if (p < 0) return;
    const SiteIndex last = items_.back();
    items_[static_cast<std::size_t>(p)] = last;
    pos_[last] = p;
    items_.pop_back();
    pos_[x] = -1;
  }
  std::size_t size() const noexcept { return items_.size(); }
  SiteIndex operator[](std::size_t k) const noexcept { return items_[k]; }

 private:
  std::vector<std::int64_t> pos_;
  std::vector<SiteIndex> items_;
};

}  // namespace

Trajectory run_graphical(const ModelParams& params, const Torus& init, double horizon,
                         std::uint64_t seed, const RunOptions& options) {
  params.validate(false);
  check_horizon(horizon);
  Torus cfg = init;
  EventScheduler sched(cfg.shared_geometry(), params, seed);
  for (SiteIndex x = 0; x < cfg.size(); ++x) {
    if (is_occupied(cfg.at(x))) sched.set_activity(x, cfg.at(x), 0.0);
  }
  TrajectoryRecorder rec(options, cfg, horizon, seed);
  double end_time = horizon;
  std::uint64_t rings = 0;
  while (auto ev = sched.pop(horizon)) {
    ++rings;
    rec.advance_to(ev->time, cfg);
    const SiteState before = cfg.at(ev->to);
    if (apply_event(cfg, *ev)) {
      rec.on_applied(*ev, before, cfg.at(ev->to));
      sched.set_activity(ev->to, cfg.at(ev->to), ev->time);
    }
    if (options.max_rings != 0 && rings >= options.max_rings) {
      end_time = ev->time;
      break;
    }
  }
  Trajectory traj = rec.finish(cfg, end_time);
  traj.rings = rings;
  return traj;
}

Trajectory run_gillespie(const ModelParams& params, const Torus& init, double horizon,
                         std::uint64_t seed, const RunOptions& options) {
  params.validate(false);
  check_horizon(horizon);
  Torus cfg = init;
  const Geometry& g = cfg.geometry();
  SiteSet occupied(cfg.size()), fertile1(cfg.size()), fertile2(cfg.size());
  auto track = [&](SiteIndex x) {
    const SiteState s = cfg.at(x);
    if (is_occupied(s)) occupied.insert(x); else occupied.erase(x);
    if (s == SiteState::fertile1) fertile1.insert(x); else fertile1.erase(x);
    if (s == SiteState::fertile2) fertile2.insert(x); else fertile2.erase(x);
  };
  for (SiteIndex x = 0; x < cfg.size(); ++x) track(x);

  TrajectoryRecorder rec(options, cfg, horizon, seed);
  CounterRng rng(seed, stream_key(StreamDomain::gillespie, 0));
  double t = 0.0;
  double end_time = horizon;
  std::uint64_t rings = 0;
  while (true) {
    const double death_rate = static_cast<double>(occupied.size());
    const double birth1 = params.lambda1 * static_cast<double>(fertile1.size());
    const double birth2 = params.lambda2 * static_cast<double>(fertile2.size());
    const double total = death_rate + birth1 + birth2;
    if (total <= 0) break;
    t += rng.exponential(total);
    if (t > horizon) break;
    ++rings;
    rec.advance_to(t, cfg);

    EventRecord ev;
    ev.time = t;
    const double u = rng.uniform() * total;
    if (u < death_rate) {
      const SiteIndex x = occupied[rng.below(occupied.size())];
      ev.kind = EventKind::death;
      ev.from = ev.to = x;
    } else {
      const int type = u < death_rate + birth1 ? 1 : 2;
      const SiteSet& parents = type == 1 ? fertile1 : fertile2;
      const SiteIndex x = parents[rng.below(parents.size())];
      const auto edge = static_cast<int>(rng.below(static_cast<std::uint64_t>(g.degree())));
      ev.kind = arrow_kind(type, rng.bernoulli(params.p(type)));
      ev.from = x;
      ev.to = g.neighbor(x, edge);
    }
    const SiteState before = cfg.at(ev.to);
    if (apply_event(cfg, ev)) {
      track(ev.to);
      rec.on_applied(ev, before, cfg.at(ev.to));
    }
    if (options.max_rings != 0 && rings >= options.max_rings) {
      end_time = t;
      break;
    }
  }
  Trajectory traj = rec.finish(cfg, end_time);
  traj.rings = rings;
  return traj;
}

namespace {

class Cascade {
 public:
  Cascade(const ModelParams& params, Torus& cfg, EventScheduler& sched,
          TrajectoryRecorder& rec, CounterRng& rng, CascadeOrder order)
      : params_(params),
        cfg_(cfg),
        sched_(sched),
        rec_(rec),
        rng_(rng),
        order_(order),
        in_frontier_(cfg.size(), 0) {}

  bool eligible_parent(SiteState s) const noexcept {
    return is_fertile(s) && params_.infinite(type_of(s));
  }

  /// Register the empty site y as a frontier candidate via parent x.
  void add(SiteIndex y, SiteIndex x) {
    if (order_ == CascadeOrder::uniform_pairs) {
      pairs_.emplace_back(y, x);
    } else if (!in_frontier_[y]) {
      in_frontier_[y] = 1;
      sites_.push_back(y);
    }
  }

  /// Frontier pairs created by site y becoming empty.
  void add_emptied(SiteIndex y) {
    for (SiteIndex x : cfg_.neighbors(y)) {
      if (eligible_parent(cfg_.at(x))) add(y, x);
    }
  }

  void add_all() {
    for (SiteIndex y = 0; y < cfg_.size(); ++y) {
      if (cfg_.at(y) == SiteState::empty) add_emptied(y);
    }
  }

  void run(double time) {
    if (order_ == CascadeOrder::uniform_pairs) {
      while (!pairs_.empty()) {
        const auto k = static_cast<std::size_t>(rng_.below(pairs_.size()));
        const auto [y, x] = pairs_[k];
        pairs_[k] = pairs_.back();
        pairs_.pop_back();
        if (cfg_.at(y) != SiteState::empty) continue;
        fill(time, y, x);
      }
    } else {
      std::vector<SiteIndex> parents;
      while (!sites_.empty()) {
        const auto k = static_cast<std::size_t>(rng_.below(sites_.size()));
        const SiteIndex y = sites_[k];
        sites_[k] = sites_.back();
        sites_.pop_back();
        in_frontier_[y] = 0;
        if (cfg_.at(y) != SiteState::empty) continue;
        parents.clear();
        for (SiteIndex x : cfg_.neighbors(y)) {
          if (eligible_parent(cfg_.at(x))) parents.push_back(x);
        }
        if (parents.empty()) continue;
        fill(time, y, parents[static_cast<std::size_t>(rng_.below(parents.size()))]);
      }
    }
  }

 private:
  void fill(double time, SiteIndex y, SiteIndex x) {
    const int type = type_of(cfg_.at(x));
    const bool fertile = rng_.bernoulli(params_.p(type));
    const EventRecord ev{time, arrow_kind(type, fertile), x, y};
    apply_event(cfg_, ev);
    rec_.on_applied(ev, SiteState::empty, cfg_.at(y));
    sched_.set_activity(y, cfg_.at(y), time);
    if (fertile) {
      for (SiteIndex z : cfg_.neighbors(y)) {
        if (cfg_.at(z) == SiteState::empty) add(z, y);
      }
    }
  }

  const ModelParams& params_;
  Torus& cfg_;
  EventScheduler& sched_;
  TrajectoryRecorder& rec_;
  CounterRng& rng_;
  CascadeOrder order_;
  std::vector<std::pair<SiteIndex, SiteIndex>> pairs_;
  std::vector<SiteIndex> sites_;
  std::vector<char> in_frontier_;
};

}  // namespace

Trajectory run_infinite_rate(const ModelParams& params, const Torus& init, double horizon,
                             std::uint64_t seed, const RunOptions& options,
                             CascadeOrder order) {
  params.validate(true);
  check_horizon(horizon);
  if (!params.any_infinite()) {
    throw ConfigError("run_infinite_rate needs an infinite birth rate; use run_graphical");
  }
  Torus cfg = init;
  EventScheduler sched(cfg.shared_geometry(), params, seed);
  for (SiteIndex x = 0; x < cfg.size(); ++x) {
    if (is_occupied(cfg.at(x))) sched.set_activity(x, cfg.at(x), 0.0);
  }
  TrajectoryRecorder rec(options, cfg, horizon, seed);
  CounterRng rng(seed, stream_key(StreamDomain::cascade, 0));
  Cascade cascade(params, cfg, sched, rec, rng, order);
  cascade.add_all();
  cascade.run(0.0);

  double end_time = horizon;
  std::uint64_t rings = 0;
  while (auto ev = sched.pop(horizon)) {
    ++rings;
    rec.advance_to(ev->time, cfg);
    const SiteState before = cfg.at(ev->to);
    if (apply_event(cfg, *ev)) {
      rec.on_applied(*ev, before, cfg.at(ev->to));
      sched.set_activity(ev->to, cfg.at(ev->to), ev->time);
      if (cfg.at(ev->to) == SiteState::empty) {
        cascade.add_emptied(ev->to);
        cascade.run(ev->time);
      }
    }
    if (options.max_rings != 0 && rings >= options.max_rings) {
      end_time = ev->time;
      break;
    }
  }
  Trajectory traj = rec.finish(cfg, end_time);
  traj.rings = rings;
  return traj;
}

Trajectory run_simulation(const ModelParams& params, const Torus& init, double horizon,
                          std::uint64_t seed, const RunOptions& options) {
  if (params.any_infinite()) return run_infinite_rate(params, init, horizon, seed, options);
  return run_graphical(params, init, horizon, seed, options);
}

}  // namespace scp
