#include "scp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "scp/branching.hpp"
#include "scp/config_text.hpp"
#include "scp/errors.hpp"
#include "scp/event_scheduler.hpp"
#include "scp/format.hpp"
#include "scp/parallel.hpp"
#include "scp/percolation.hpp"
#include "scp/simulator.hpp"

namespace scp::experiments {

namespace {

std::shared_ptr<const Geometry> make_geometry(const std::vector<int>& sides) {
  return std::make_shared<const Geometry>(sides);
}

const char* side_of(double value, double reference) {
  if (value < reference) return "below";
  if (value > reference) return "above";
  return "on";
}

}  // namespace

void SweepSpec::validate() const {
  if (points.empty()) throw ConfigError("sweep grid is empty");
  if (replicas == 0) throw ConfigError("replicas must be >= 1");
  if (horizons.empty()) throw ConfigError("sweep needs at least one horizon");
  for (double h : horizons) {
    if (!(h > 0.0) || std::isinf(h)) throw ConfigError("sweep horizons must be positive and finite");
  }
  for (const auto& p : points) p.validate(true);
}

std::vector<ModelParams> single_type_grid(const std::vector<double>& lambdas,
                                          const std::vector<double>& ps) {
  std::vector<ModelParams> out;
  for (double l : lambdas) {
    for (double p : ps) out.push_back(ModelParams{l, 0.0, p, 1.0});
  }
  return out;
}

SweepResult sweep_phase(const SweepSpec& spec) {
  spec.validate();
  const auto geometry = make_geometry(spec.sides);
  std::vector<double> horizons = spec.horizons;
  std::sort(horizons.begin(), horizons.end());
  const double horizon = horizons.back();
  const std::size_t jobs = spec.points.size() * spec.replicas;
  // Per job: fertile count at each horizon.
  std::vector<std::vector<std::size_t>> fertile(jobs);

  parallel_for(jobs, spec.threads, [&](std::size_t job) {
    const std::size_t point = job / spec.replicas;
    const std::size_t replica = job % spec.replicas;
    const std::uint64_t seed = replica_seed(spec.seed_base, replica);
    const Torus init = parse_config(spec.initial, geometry, seed);
    std::vector<std::size_t> at(horizons.size(), 0);
    std::size_t next = 0;
    std::size_t count = occupancy(init).fertile();
    RunOptions opt;
    opt.on_event = [&](const EventRecord& ev, SiteState before, SiteState after) {
      while (next < horizons.size() && horizons[next] < ev.time) at[next++] = count;
      count += is_fertile(after);
      count -= is_fertile(before);
    };
    run_simulation(spec.points[point], init, horizon, seed, opt);
    while (next < horizons.size()) at[next++] = count;
    fertile[job] = std::move(at);
  });

  SweepResult result;
  result.dimension = geometry->dim();
  result.lambda_c = spec.lambda_c;
  const double sites = static_cast<double>(geometry->size());
  for (std::size_t point = 0; point < spec.points.size(); ++point) {
    for (std::size_t h = 0; h < horizons.size(); ++h) {
      SweepCell cell;
      cell.params = spec.points[point];
      cell.horizon = horizons[h];
      cell.replicas = spec.replicas;
      double density = 0.0;
      for (std::size_t r = 0; r < spec.replicas; ++r) {
        const std::size_t f = fertile[point * spec.replicas + r][h];
        cell.survived += f > 0;
        density += static_cast<double>(f) / sites;
      }
      cell.mean_fertile_density = density / static_cast<double>(spec.replicas);
      cell.wilson = stats::wilson_interval(cell.survived, cell.replicas);
      result.cells.push_back(cell);
    }
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "lambda1,p1,lambda2,p2,horizon,replicas,survived,frequency,wilson_lo,wilson_hi,"
         "mean_fertile_density,lambda_p,ref_lambda_p_1,ref_lambda_c,ref_p_quarter_d\n";
  const double quarter = 1.0 / (4.0 * result.dimension);
  for (const auto& c : result.cells) {
    const double lp = c.params.lambda1 * c.params.p1;
    out << format_double(c.params.lambda1) << ',' << format_double(c.params.p1) << ','
        << format_double(c.params.lambda2) << ',' << format_double(c.params.p2) << ','
        << format_double(c.horizon) << ',' << c.replicas << ',' << c.survived << ','
        << format_double(static_cast<double>(c.survived) / static_cast<double>(c.replicas)) << ','
        << format_double(c.wilson.lower) << ',' << format_double(c.wilson.upper) << ','
        << format_double(c.mean_fertile_density) << ',' << format_double(lp) << ','
        << side_of(lp, 1.0) << ',' << (result.lambda_c ? side_of(lp, *result.lambda_c) : "na")
        << ',' << side_of(c.params.p1, quarter) << '\n';
  }
}

LambdaCEstimate estimate_lambda_c(const std::vector<int>& sides, double horizon, std::size_t replicas,
                                  std::uint64_t seed, double lo, double hi, int iterations,
                                  double target, unsigned threads) {
  if (!(lo >= 0.0 && hi > lo) || std::isinf(hi)) throw ConfigError("need 0 <= lo < hi < inf");
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  LambdaCEstimate est;
  est.lower = lo;
  est.upper = hi;
  for (int it = 0; it < iterations; ++it) {
    const double mid = 0.5 * (est.lower + est.upper);
    SweepSpec spec;
    spec.points = {ModelParams{mid, 0.0, 1.0, 1.0}};
    spec.sides = sides;
    spec.horizons = {horizon};
    spec.replicas = replicas;
    spec.seed_base = seed;
    spec.initial = "product(1,0,0,0)";
    spec.threads = threads;
    const SweepResult r = sweep_phase(spec);
    const double freq = static_cast<double>(r.cells[0].survived) / static_cast<double>(replicas);
    est.probes.emplace_back(mid, freq);
    if (freq >= target) est.upper = mid; else est.lower = mid;
  }
  est.lambda_c = 0.5 * (est.lower + est.upper);
  return est;
}

DecayReport measure_decay(const DecaySpec& spec) {
  const ModelParams& m = spec.params;
  m.validate(true);
  if (m.lambda2 != 0.0) throw ConfigError("measure_decay takes a single-type model (lambda2 = 0)");
  if (!(4.0 * spec.dimension * m.p1 < 1.0)) {
    throw ConfigError("measure_decay needs p < 1/4d; the tail is not defined otherwise");
  }
  if (spec.max_n < 1) throw ConfigError("max_n must be >= 1");
  if (spec.replicas == 0) throw ConfigError("replicas must be >= 1");
  const auto geometry = make_geometry(std::vector<int>(static_cast<std::size_t>(spec.dimension), spec.side));
  const SiteIndex origin = geometry->center();
  Torus init(geometry);
  init.set(origin, SiteState::fertile1);

  DecayReport rep;
  rep.radius.assign(spec.replicas, 0);
  rep.lifetime.assign(spec.replicas, 0.0);
  rep.fertile_total.assign(spec.replicas, 1);
  std::vector<std::uint8_t> censored(spec.replicas, 0);
  parallel_for(spec.replicas, spec.threads, [&](std::size_t r) {
    int radius = 0;
    std::uint64_t total = 1;
    RunOptions opt;
    opt.on_event = [&](const EventRecord& ev, SiteState, SiteState after) {
      if (after == SiteState::fertile1) {
        ++total;
        radius = std::max(radius, geometry->sup_distance(origin, ev.to));
      }
    };
    const Trajectory t = run_simulation(m, init, spec.horizon, replica_seed(spec.seed, r), opt);
    rep.radius[r] = radius;
    rep.fertile_total[r] = total;
    if (t.fertile_extinction_time) {
      rep.lifetime[r] = *t.fertile_extinction_time;
    } else {
      rep.lifetime[r] = spec.horizon;
      censored[r] = 1;
    }
  });
  for (auto c : censored) rep.censored += c;

  const auto gw = branching::GWSpec::make(spec.dimension, m.p1);
  const auto cert = branching::find_s1(gw);
  const double reps = static_cast<double>(spec.replicas);
  std::vector<double> xs, ys, xt, yt;
  constexpr std::size_t kMinHits = 10;
  for (int n = 1; n <= spec.max_n; ++n) {
    std::size_t space = 0, time = 0, escape = 0;
    for (std::size_t r = 0; r < spec.replicas; ++r) {
      const bool s = rep.radius[r] > n;
      const bool t = rep.lifetime[r] > n;
      space += s;
      time += t;
      escape += s || t;
    }
    DecayRow row;
    row.n = n;
    row.space_tail = static_cast<double>(space) / reps;
    row.time_tail = static_cast<double>(time) / reps;
    row.escape = static_cast<double>(escape) / reps;
    row.bound = cert.C1 * std::pow(cert.s1, -n) + cert.C1 * std::pow(cert.s1, -n / 2.0) +
                std::pow(std::exp(1.0) / 2.0, -n / 2.0);
    rep.rows.push_back(row);
    if (space >= kMinHits) {
      xs.push_back(n);
      ys.push_back(std::log(row.space_tail));
    }
    if (time >= kMinHits) {
      xt.push_back(n);
      yt.push_back(std::log(row.time_tail));
    }
  }
  rep.fit_points_space = xs.size();
  rep.fit_points_time = xt.size();
  if (xs.size() >= 3) rep.space_fit = stats::linear_fit(xs, ys);
  if (xt.size() >= 3) rep.time_fit = stats::linear_fit(xt, yt);
  return rep;
}

void write_decay_csv(std::ostream& out, const DecayReport& report) {
  out << "n,space_tail,time_tail,escape,bound\n";
  for (const auto& r : report.rows) {
    out << r.n << ',' << format_double(r.space_tail) << ',' << format_double(r.time_tail) << ','
        << format_double(r.escape) << ',' << format_double(r.bound) << '\n';
  }
}

BlockReport estimate_block_empty(const BlockSpec& spec) {
  const ModelParams m{spec.lambda, 0.0, spec.p, 1.0};
  m.validate(false);
  if (spec.L < 1) throw ConfigError("L must be >= 1");
  if (spec.dimension < 1 || spec.dimension > 3) throw ConfigError("dimension must lie in [1, 3]");
  if (spec.replicas == 0) throw ConfigError("replicas must be >= 1");
  const int L = spec.L;
  const auto geometry =
      make_geometry(std::vector<int>(static_cast<std::size_t>(spec.dimension), 4 * L + 3));
  const SiteIndex origin = geometry->center();
  const std::size_t n = geometry->size();
  std::vector<int> dist(n);
  for (SiteIndex x = 0; x < n; ++x) dist[x] = geometry->sup_distance(origin, x);

  BlockReport rep;
  rep.replicas = spec.replicas;
  rep.Lambda2 = 4.0 * spec.dimension * L * std::pow(4.0 * L + 1.0, spec.dimension - 1);
  rep.entries_bound = 1.0 - std::pow(4.0 / std::exp(1.0), -rep.Lambda2);
  std::vector<std::uint8_t> invaded(spec.replicas, 0);
  std::vector<std::size_t> entries(spec.replicas, 0);
  const double t_low = L, t_high = 2.0 * L;

  parallel_for(spec.replicas, spec.threads, [&](std::size_t r) {
    Torus cfg(geometry);
    cfg.fill(SiteState::fertile1);  // bottom of B full, outer ring frozen fertile
    EventScheduler sched(geometry, m, replica_seed(spec.seed, r));
    for (SiteIndex x = 0; x < n; ++x) sched.set_activity(x, EventScheduler::activity_of(cfg.at(x)), 0.0);
    bool checked_slice = false;
    bool hit = false;
    std::size_t entered = 0;
    while (auto ev = sched.pop(t_high)) {
      if (!checked_slice && ev->time >= t_low) {
        checked_slice = true;
        for (SiteIndex x = 0; x < n && !hit; ++x) hit = dist[x] <= L && is_occupied(cfg.at(x));
      }
      if (dist[ev->to] > 2 * L) continue;  // the frozen ring never changes
      EventRecord e = *ev;
      const bool from_outside = dist[e.from] > 2 * L;
      if (from_outside && is_arrow(e.kind)) e.kind = EventKind::arrow_fertile1;
      if (!apply_event(cfg, e)) continue;
      if (from_outside && is_arrow(e.kind)) ++entered;
      if (checked_slice && is_arrow(e.kind) && dist[e.to] <= L) hit = true;
      sched.set_activity(e.to, EventScheduler::activity_of(cfg.at(e.to)), e.time);
    }
    if (!checked_slice) {
      for (SiteIndex x = 0; x < n && !hit; ++x) hit = dist[x] <= L && is_occupied(cfg.at(x));
    }
    invaded[r] = hit;
    entries[r] = entered;
  });

  double total_entries = 0.0;
  for (std::size_t r = 0; r < spec.replicas; ++r) {
    rep.invaded += invaded[r];
    rep.entries_within += static_cast<double>(entries[r]) <= 2.0 * rep.Lambda2;
    total_entries += static_cast<double>(entries[r]);
  }
  rep.estimate = static_cast<double>(rep.invaded) / static_cast<double>(rep.replicas);
  rep.mean_entries = total_entries / static_cast<double>(rep.replicas);
  return rep;
}

CompetitionReport run_competition(const CompetitionSpec& spec) {
  spec.params.validate(true);
  if (spec.replicas == 0) throw ConfigError("replicas must be >= 1");
  CompetitionReport rep;
  const auto geometry = make_geometry(spec.sides);
  const ModelParams& m = spec.params;
  const int d = geometry->dim();
  if (!spec.lambda_c_proxy) {
    rep.warnings.push_back("no lambda_c proxy given; lambda1 is not checked");
  } else if (!(m.lambda1 > *spec.lambda_c_proxy)) {
    rep.warnings.push_back("lambda1 is not above the lambda_c proxy");
  }
  if (m.p1 != 1.0) rep.warnings.push_back("p1 != 1");
  if (!(4.0 * d * m.p2 < 1.0)) rep.warnings.push_back("p2 is not below 1/4d");

  rep.replicas.resize(spec.replicas);
  parallel_for(spec.replicas, spec.threads, [&](std::size_t r) {
    const std::uint64_t seed = replica_seed(spec.seed, r);
    const Torus init = parse_config(spec.initial, geometry, seed);
    std::size_t type2 = occupancy(init).of_type(2);
    CompetitionReplica out;
    out.seed = seed;
    if (type2 == 0) out.type2_extinction_time = 0.0;
    RunOptions opt;
    opt.sample_interval = spec.sample_interval;
    opt.on_event = [&](const EventRecord& ev, SiteState before, SiteState after) {
      type2 += type_of(after) == 2;
      type2 -= type_of(before) == 2;
      if (type2 == 0 && !out.type2_extinction_time) out.type2_extinction_time = ev.time;
    };
    Trajectory t = run_simulation(m, init, spec.horizon, seed, opt);
    const Occupancy end = occupancy(t.terminal);
    out.type2_extinct = end.of_type(2) == 0;
    out.type1_alive = end.of_type(1) > 0;
    out.series = std::move(t.samples);
    rep.replicas[r] = std::move(out);
  });
  for (const auto& r : rep.replicas) {
    rep.type2_extinct += r.type2_extinct;
    rep.type1_alive += r.type1_alive;
  }
  return rep;
}

void write_competition_ndjson(std::ostream& out, const CompetitionReport& report) {
  for (const auto& r : report.replicas) {
    for (const auto& s : r.series) {
      out << "{\"seed\":" << r.seed << ",\"t\":" << format_double(s.time) << ",\"counts\":[";
      for (std::size_t i = 0; i < s.counts.counts.size(); ++i) {
        out << (i ? "," : "") << s.counts.counts[i];
      }
      out << "]}\n";
    }
  }
}

CollectionReport coupled_collections(const CollectionSpec& spec) {
  const ModelParams& m = spec.params;
  m.validate(false);
  if (spec.L < 1 || spec.K < 1) throw ConfigError("K and L must be >= 1");
  if (!(spec.horizon > 0.0) || std::isinf(spec.horizon)) throw ConfigError("horizon must be positive and finite");
  const auto geometry = make_geometry(spec.sides);
  const int d = geometry->dim();
  if (d > percolation::kMaxDim) throw ConfigError("dimension must lie in [1, 3]");
  const int L = spec.L;
  const auto blocks = static_cast<long>(std::floor(spec.horizon / (static_cast<double>(L) * L)));
  const long reach = (2L * std::abs(spec.z) + blocks + 3) * L;
  for (int s : geometry->sides()) {
    if (2 * reach + 1 > s || 2L * spec.K * L + 1 > s) {
      throw ConfigError("torus too small for the cone and window (need side > 2 * " +
                        std::to_string(std::max<long>(reach, static_cast<long>(spec.K) * L)) + ")");
    }
  }
  const SiteIndex origin = geometry->center();
  const std::size_t n = geometry->size();
  std::vector<std::array<int, percolation::kMaxDim>> rel(n);
  std::vector<int> window_dist(n);  // sup distance to 2zL
  for (SiteIndex x = 0; x < n; ++x) {
    rel[x] = {};
    int dd = 0;
    for (int a = 0; a < d; ++a) {
      const int v = geometry->displacement(origin, x, a);
      rel[x][static_cast<std::size_t>(a)] = v;
      dd = std::max(dd, std::abs(v - (a == 0 ? 2 * spec.z * L : 0)));
    }
    window_dist[x] = dd;
  }
  percolation::Cone cone;
  cone.d = d;
  cone.L = L;
  cone.z[0] = spec.z;

  Torus xi = parse_config(spec.initial, geometry, spec.seed);
  if (spec.force_c) {
    for (SiteIndex x = 0; x < n; ++x) {
      if (window_dist[x] <= spec.K * L && type_of(xi.at(x)) == 2) xi.set(x, SiteState::empty);
    }
  }
  Torus eta1(geometry), eta1bar(geometry), eta2(geometry);
  CollectionReport rep;
  rep.c_holds = true;
  for (SiteIndex x = 0; x < n; ++x) {
    const SiteState s = xi.at(x);
    if (type_of(s) == 1 && window_dist[x] <= L) {
      eta1.set(x, s);
      eta1bar.set(x, s);
    }
    if (type_of(s) == 2) {
      if (window_dist[x] > spec.K * L) eta2.set(x, s);
      else rep.c_holds = false;
    }
  }

  std::array<Torus*, 4> procs{&xi, &eta1, &eta1bar, &eta2};
  EventScheduler sched(geometry, m, spec.seed);
  auto refresh = [&](SiteIndex x, double now) {
    EventScheduler::Activity a;
    for (const Torus* p : procs) {
      const SiteState s = p->at(x);
      a.occupied = a.occupied || is_occupied(s);
      a.fertile1 = a.fertile1 || s == SiteState::fertile1;
      a.fertile2 = a.fertile2 || s == SiteState::fertile2;
    }
    sched.set_activity(x, a, now);
  };
  for (SiteIndex x = 0; x < n; ++x) refresh(x, 0.0);

  std::size_t eta2_fertile = occupancy(eta2)[SiteState::fertile2];
  long block = 0;
  auto sweep_block = [&](double t) {
    for (SiteIndex x = 0; x < n; ++x) {
      if (is_occupied(eta1bar.at(x)) && !cone.in_nabla_z(rel[x], t)) {
        eta1bar.set(x, SiteState::empty);
        refresh(x, t);
      }
      if (is_occupied(eta2.at(x)) && cone.in_nabla_z(rel[x], t)) rep.b_holds = false;
    }
  };
  sweep_block(0.0);

  auto contained = [&](SiteIndex x) {
    return type_of(xi.at(x)) != 2 || type_of(eta2.at(x)) == 2;
  };

  while (auto ev = sched.pop(spec.horizon)) {
    ++rep.events;
    const double LL = static_cast<double>(L) * L;
    const auto b = static_cast<long>(std::floor(ev->time / LL));
    if (b != block) {
      block = b;
      // Inside a block the slice of nabla_z is constant.
      sweep_block((static_cast<double>(b) + 0.5) * LL);
    }
    const SiteIndex y = ev->to;
    bool changed = false;
    for (Torus* p : procs) {
      const SiteState before = p->at(y);
      if (!apply_event(*p, *ev)) continue;
      changed = true;
      if (p == &eta1bar && is_occupied(p->at(y)) && !cone.in_nabla_z(rel[y], ev->time)) {
        p->set(y, SiteState::empty);
      }
      if (p == &eta2) {
        if (is_occupied(p->at(y)) && cone.in_nabla_z(rel[y], ev->time)) rep.b_holds = false;
        eta2_fertile += p->at(y) == SiteState::fertile2;
        eta2_fertile -= before == SiteState::fertile2;
        if (!rep.eta2_fertile_series.empty() && eta2_fertile > rep.eta2_fertile_series.back()) {
          rep.eta2_fertile_monotone = false;
        }
        rep.eta2_fertile_series.push_back(eta2_fertile);
      }
    }
    if (changed) {
      refresh(y, ev->time);
      if (rep.c_holds) {
        ++rep.containment_checks;
        if (!contained(y)) {
          ++rep.containment_violations;
          if (!rep.first_violation_time) rep.first_violation_time = ev->time;
        }
      }
    }
    if (spec.max_rings != 0 && rep.events >= spec.max_rings) break;
  }
  rep.a_holds = occupancy(eta1bar).of_type(1) > 0;
  return rep;
}

namespace {

int gray_level(SiteState s, bool two_type) {
  switch (s) {
    case SiteState::empty: return 255;
    case SiteState::fertile1: return 0;
    case SiteState::sterile1: return two_type ? 64 : 128;
    case SiteState::fertile2: return two_type ? 160 : 0;
    case SiteState::sterile2: return two_type ? 208 : 128;
  }
  return 255;
}

std::string levels_comment(bool two_type) {
  return two_type ? "levels +1=0 -1=64 +2=160 -2=208 empty=255"
                  : "levels fertile=0 sterile=128 empty=255";
}

std::string pgm_from_rows(const std::vector<std::vector<int>>& rows, bool two_type,
                          const std::string& comment) {
  std::ostringstream os;
  os << "P2\n# " << levels_comment(two_type);
  if (!comment.empty()) os << "; " << comment;
  os << '\n' << (rows.empty() ? 0 : rows[0].size()) << ' ' << rows.size() << "\n255\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? " " : "") << row[i];
    os << '\n';
  }
  return os.str();
}

}  // namespace

std::string pgm_image(const Torus& cfg, bool two_type, const std::string& comment) {
  const auto& sides = cfg.geometry().sides();
  std::size_t width = 0, height = 0;
  if (sides.size() == 1) {
    width = static_cast<std::size_t>(sides[0]);
    height = 1;
  } else if (sides.size() == 2) {
    height = static_cast<std::size_t>(sides[0]);
    width = static_cast<std::size_t>(sides[1]);
  } else {
    throw ConfigError("snapshots are drawn for 1-d and 2-d tori only");
  }
  std::vector<std::vector<int>> rows(height, std::vector<int>(width));
  for (SiteIndex x = 0; x < cfg.size(); ++x) rows[x / width][x % width] = gray_level(cfg.at(x), two_type);
  return pgm_from_rows(rows, two_type, comment);
}

std::string pgm_raster(const std::vector<Torus>& rows_cfg, bool two_type, const std::string& comment) {
  std::vector<std::vector<int>> rows;
  for (const Torus& t : rows_cfg) {
    if (t.dim() != 1) throw ConfigError("space-time rasters need a 1-d torus");
    std::vector<int> row(t.size());
    for (SiteIndex x = 0; x < t.size(); ++x) row[x] = gray_level(t.at(x), two_type);
    rows.push_back(std::move(row));
  }
  return pgm_from_rows(rows, two_type, comment);
}

void emit_snapshot(const Trajectory& traj, double t, const std::string& path, bool two_type) {
  std::string text;
  const std::string comment = "t=" + format_double(t);
  if (traj.initial.dim() == 2) {
    text = pgm_image(snapshot(traj, t), two_type, comment);
  } else if (traj.initial.dim() == 1) {
    std::vector<Torus> rows;
    for (const Sample& s : traj.samples) {
      if (s.time > t) break;
      rows.push_back(snapshot(traj, s.time));
    }
    if (rows.empty()) throw ConfigError("no sampled configuration at or before t");
    text = pgm_raster(rows, two_type, comment);
  } else {
    throw ConfigError("snapshots are drawn for 1-d and 2-d tori only");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write snapshot to '" + path + "'");
  out << text;
  if (!out) throw ConfigError("cannot write snapshot to '" + path + "'");
}

double mean_gray_level(const std::string& pgm) {
  std::istringstream in(pgm);
  std::string magic;
  in >> magic;
  if (magic != "P2") throw ConfigError("not a P2 image");
  std::vector<long> header;
  std::string tok;
  while (header.size() < 3 && in >> tok) {
    if (tok[0] == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    header.push_back(std::stol(tok));
  }
  if (header.size() < 3) throw ConfigError("truncated P2 header");
  double sum = 0.0;
  long count = 0, v = 0;
  while (in >> v) {
    sum += static_cast<double>(v);
    ++count;
  }
  if (count != header[0] * header[1]) throw ConfigError("P2 pixel count mismatch");
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

}  // namespace scp::experiments
