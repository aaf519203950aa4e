#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "scp/branching.hpp"
#include "scp/config_text.hpp"
#include "scp/coupling.hpp"
#include "scp/errors.hpp"
#include "scp/experiments.hpp"
#include "scp/format.hpp"
#include "scp/kv_config.hpp"
#include "scp/meanfield.hpp"
#include "scp/percolation.hpp"
#include "scp/simulator.hpp"

namespace scp::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Invocation {
  std::string config_path;
  std::string out_dir = "scp-out";
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;
};

// Keys every subcommand accepts.
const std::set<std::string> kCommonKeys{"seed", "replicas", "horizon", "threads"};

const std::set<std::string> kModelKeys{"lambda", "lambda1", "lambda2", "p", "p1", "p2", "sides", "initial"};

std::set<std::string> keys(std::initializer_list<std::set<std::string>> groups,
                           std::initializer_list<std::string> extra = {}) {
  std::set<std::string> out = kCommonKeys;
  for (const auto& g : groups) out.insert(g.begin(), g.end());
  out.insert(extra.begin(), extra.end());
  return out;
}

KeyValueConfig load(const Invocation& inv, const std::set<std::string>& known) {
  KeyValueConfig cfg = inv.config_path.empty() ? KeyValueConfig{} : KeyValueConfig::from_file(inv.config_path);
  for (const auto& s : inv.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + s + "'");
    cfg.set(s.substr(0, eq), s.substr(eq + 1));
  }
  for (const auto& [k, v] : inv.flags) cfg.set(k, v);
  if (const auto seed = seed_override()) cfg.set("seed", std::to_string(*seed));
  cfg.require_known(known);
  return cfg;
}

double get_alias(const KeyValueConfig& cfg, const std::string& key, const std::string& alias, double fallback) {
  if (cfg.has(key) && cfg.has(alias)) throw ConfigError("give either '" + key + "' or '" + alias + "', not both");
  return cfg.has(alias) ? cfg.get_double(alias, fallback) : cfg.get_double(key, fallback);
}

ModelParams read_params(const KeyValueConfig& cfg, bool allow_infinite = true) {
  ModelParams m;
  m.lambda1 = get_alias(cfg, "lambda1", "lambda", 0.0);
  m.p1 = get_alias(cfg, "p1", "p", 1.0);
  m.lambda2 = cfg.get_double("lambda2", 0.0);
  m.p2 = cfg.get_double("p2", 1.0);
  m.validate(allow_infinite);
  return m;
}

std::size_t read_count(const KeyValueConfig& cfg, const std::string& key, std::int64_t fallback) {
  const std::int64_t v = cfg.get_int(key, fallback);
  if (v < 1) throw ConfigError(key + " must be >= 1");
  return static_cast<std::size_t>(v);
}

double read_horizon(const KeyValueConfig& cfg, double fallback) {
  const double h = cfg.get_double("horizon", fallback);
  if (!(h > 0.0) || std::isinf(h)) throw ConfigError("horizon must be positive and finite");
  return h;
}

unsigned read_threads(const KeyValueConfig& cfg) {
  const std::int64_t t = cfg.get_int("threads", 0);
  if (t < 0 || t > 1024) throw ConfigError("threads must lie in [0, 1024]");
  return static_cast<unsigned>(t);
}

std::vector<int> read_sides(const KeyValueConfig& cfg, std::vector<int> fallback) {
  auto sides = cfg.get_ints("sides", fallback);
  if (sides.size() > 3) throw ConfigError("sides: at most 3 axes");
  for (int s : sides) {
    if (s < 3) throw ConfigError("sides: every side must be >= 3");
  }
  return sides;
}

fs::path prepare_out(const Invocation& inv) {
  const fs::path dir(inv.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory '" + inv.out_dir + "'");
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
}

json params_json(const ModelParams& m) {
  return json{{"lambda1", m.lambda1}, {"p1", m.p1}, {"lambda2", m.lambda2}, {"p2", m.p2}};
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json counts_json(const Occupancy& o) { return json(o.counts); }

// --- subcommands ------------------------------------------------------------

int cmd_simulate(const Invocation& inv, std::ostream& out) {
  const auto cfg = load(inv, keys({kModelKeys}, {"sample_interval", "engine", "cascade", "include_config"}));
  const ModelParams m = read_params(cfg);
  const auto geometry = std::make_shared<const Geometry>(read_sides(cfg, {100}));
  const double horizon = read_horizon(cfg, 100.0);
  const std::size_t replicas = read_count(cfg, "replicas", 1);
  const std::uint64_t seed = cfg.get_u64("seed", 1);
  const std::string engine = cfg.get_string("engine", "graphical");
  const std::string cascade = cfg.get_string("cascade", "uniform_pairs");
  const std::string initial = cfg.get_string("initial", "single-fertile-1@center");
  if (engine != "graphical" && engine != "gillespie") throw ConfigError("engine: graphical or gillespie");
  if (cascade != "uniform_pairs" && cascade != "uniform_sites") throw ConfigError("cascade: uniform_pairs or uniform_sites");
  if (engine == "gillespie" && m.any_infinite()) throw ConfigError("the gillespie engine needs finite rates");
  RunOptions opt;
  opt.sample_interval = cfg.get_double("sample_interval", 1.0);
  if (!(opt.sample_interval >= 0.0)) throw ConfigError("sample_interval must be >= 0");
  const bool include_config = cfg.get_bool("include_config", false);
  opt.keep_snapshots = include_config;

  const fs::path dir = prepare_out(inv);
  std::ostringstream runs;
  std::size_t censored = 0;
  for (std::size_t r = 0; r < replicas; ++r) {
    const std::uint64_t s = experiments::replica_seed(seed, r);
    const Torus init = parse_config(initial, geometry, s);
    Trajectory t;
    if (engine == "gillespie") {
      t = run_gillespie(m, init, horizon, s, opt);
    } else if (m.any_infinite()) {
      t = run_infinite_rate(m, init, horizon, s, opt,
                            cascade == "uniform_sites" ? CascadeOrder::uniform_sites : CascadeOrder::uniform_pairs);
    } else {
      t = run_graphical(m, init, horizon, s, opt);
    }
    const bool is_censored = !t.fertile_extinction_time.has_value();
    if ((t.extinction_time && *t.extinction_time > horizon) ||
        (t.fertile_extinction_time && *t.fertile_extinction_time > horizon)) {
      throw InvariantViolation("extinction time past the horizon in replica " + std::to_string(r));
    }
    censored += is_censored;
    json series = json::array();
    for (std::size_t i = 0; i < t.samples.size(); ++i) {
      json sample{{"t", t.samples[i].time}, {"counts", counts_json(t.samples[i].counts)}};
      if (include_config && i < t.snapshots.size()) sample["config"] = pack_config(t.snapshots[i]);
      series.push_back(std::move(sample));
    }
    json rec{{"seed", s},
             {"params", params_json(m)},
             {"sides", geometry->sides()},
             {"horizon", horizon},
             {"engine", m.any_infinite() ? "infinite_rate" : engine},
             {"extinction_time", opt_json(t.extinction_time)},
             {"fertile_extinction_time", opt_json(t.fertile_extinction_time)},
             {"censored", is_censored},
             {"rings", t.rings},
             {"applied_events", t.applied_events},
             {"births", t.births},
             {"deaths", t.deaths},
             {"series", std::move(series)}};
    runs << rec.dump() << '\n';
  }
  write_file(dir / "runs.ndjson", runs.str());
  out << "simulate: " << replicas << " replica(s), " << censored << " still fertile at t=" << format_double(horizon)
      << " -> " << (dir / "runs.ndjson").string() << '\n';
  return kExitOk;
}

int cmd_sweep(const Invocation& inv, std::ostream& out) {
  const auto cfg = load(inv, keys({{"lambdas", "ps", "lambda2", "p2", "sides", "initial", "horizons", "lambda_c"}}));
  experiments::SweepSpec spec;
  const auto lambdas = cfg.get_doubles("lambdas", {0.5, 1.0, 2.0, 4.0, 8.0});
  const auto ps = cfg.get_doubles("ps", {0.1, 0.25, 0.5, 0.75, 1.0});
  const double lambda2 = cfg.get_double("lambda2", 0.0);
  const double p2 = cfg.get_double("p2", 1.0);
  for (double l : lambdas) {
    for (double p : ps) spec.points.push_back(ModelParams{l, lambda2, p, p2});
  }
  spec.sides = read_sides(cfg, {100});
  if (cfg.has("horizons") && cfg.has("horizon")) throw ConfigError("give either 'horizon' or 'horizons'");
  spec.horizons = cfg.has("horizons") ? cfg.get_doubles("horizons", {}) : std::vector<double>{read_horizon(cfg, 100.0)};
  spec.replicas = read_count(cfg, "replicas", 20);
  spec.seed_base = cfg.get_u64("seed", 1);
  spec.initial = cfg.get_string("initial", spec.initial);
  if (cfg.has("lambda_c")) {
    const double lc = cfg.get_double("lambda_c", 0.0);
    if (!(lc >= 1.0) || std::isinf(lc)) throw ConfigError("lambda_c must be a finite value >= 1");
    spec.lambda_c = lc;
  }
  spec.threads = read_threads(cfg);
  const fs::path dir = prepare_out(inv);
  const auto result = experiments::sweep_phase(spec);
  std::ostringstream csv;
  experiments::write_sweep_csv(csv, result);
  write_file(dir / "sweep.csv", csv.str());
  out << "sweep: " << result.cells.size() << " cells -> " << (dir / "sweep.csv").string() << '\n';
  return kExitOk;
}

int cmd_meanfield(const Invocation& inv, std::ostream& out) {
  const auto cfg = load(inv, keys({{"lambda", "lambda1", "lambda2", "p", "p1", "p2", "u0", "step",
                                    "record_interval", "mesh", "verify_uniqueness"}}));
  const ModelParams m = read_params(cfg, false);
  const double horizon = read_horizon(cfg, 100.0);
  meanfield::IntegrateOptions io;
  io.step = cfg.get_double("step", io.step);
  io.record_interval = cfg.get_double("record_interval", io.record_interval);
  if (!(io.step > 0.0) || !(io.record_interval >= 0.0)) throw ConfigError("step must be > 0 and record_interval >= 0");
  meanfield::FixedPointOptions fo;
  fo.mesh = static_cast<int>(cfg.get_int("mesh", fo.mesh));
  fo.verify_uniqueness = cfg.get_bool("verify_uniqueness", true);
  if (fo.mesh < 4) throw ConfigError("mesh must be >= 4");

  const bool single = m.lambda2 == 0.0;
  const fs::path dir = prepare_out(inv);
  json doc{{"params", params_json(m)}, {"outcome", meanfield::to_string(meanfield::classify_outcome(m))}};
  json points = json::array();
  const auto reports = single ? meanfield::fixed_points_single(m.lambda1, m.p1) : meanfield::fixed_points(m, fo);
  for (const auto& r : reports) {
    json p{{"kind", meanfield::to_string(r.kind)},
           {"location", single ? json(std::vector<double>{r.location[0], r.location[1]}) : json(r.location)},
           {"exists_in_simplex", r.exists_in_simplex},
           {"eigenvalues", r.eigenvalues},
           {"stability", meanfield::to_string(r.stability)}};
    if (r.theta) p["theta"] = *r.theta;
    points.push_back(std::move(p));
  }
  doc["fixed_points"] = std::move(points);

  std::ostringstream csv;
  if (single) {
    const auto u0v = cfg.get_doubles("u0", {0.1, 0.1});
    if (u0v.size() != 2) throw ConfigError("u0 needs 2 values for a single-type model");
    const meanfield::SingleState u0{u0v[0], u0v[1]};
    meanfield::require_in_simplex(u0);
    const auto sol = meanfield::integrate_single(m.lambda1, m.p1, u0, horizon, io);
    csv << "t,u_plus,u_minus\n";
    for (std::size_t i = 0; i < sol.time.size(); ++i) {
      csv << format_double(sol.time[i]) << ',' << format_double(sol.state[i][0]) << ','
          << format_double(sol.state[i][1]) << '\n';
    }
  } else {
    const auto u0v = cfg.get_doubles("u0", {0.1, 0.1, 0.1, 0.1});
    if (u0v.size() != 4) throw ConfigError("u0 needs 4 values for a two-type model");
    const meanfield::MFState u0{u0v[0], u0v[1], u0v[2], u0v[3]};
    meanfield::require_in_simplex(u0);
    const auto sol = meanfield::integrate_two(m, u0, horizon, io);
    csv << "t,u_plus1,u_minus1,u_plus2,u_minus2\n";
    for (std::size_t i = 0; i < sol.time.size(); ++i) {
      csv << format_double(sol.time[i]);
      for (double v : sol.state[i]) csv << ',' << format_double(v);
      csv << '\n';
    }
  }
  write_file(dir / "fixed_points.json", doc.dump(2) + "\n");
  write_file(dir / "trajectory.csv", csv.str());
  out << "meanfield: " << doc["fixed_points"].size() << " fixed point(s), outcome " << doc["outcome"].get<std::string>()
      << " -> " << dir.string() << '\n';
  return kExitOk;
}

int cmd_branching(const Invocation& inv, std::ostream& out) {
  const auto cfg = load(inv, keys({{"d", "p", "max_n", "cap"}}));
  const auto spec = branching::GWSpec::make(static_cast<int>(cfg.get_int("d", 1)), cfg.get_double("p", 0.2));
  const std::size_t replicas = read_count(cfg, "replicas", 10000);
  const std::uint64_t seed = cfg.get_u64("seed", 1);
  const std::int64_t max_n = cfg.get_int("max_n", 50);
  const std::uint64_t cap = cfg.get_u64("cap", branching::kProgenyCap);
  if (max_n < 1) throw ConfigError("max_n must be >= 1");
  if (!spec.subcritical()) throw ConfigError("branching: need 4 d p < 1 (the total progeny is infinite otherwise)");
  const fs::path dir = prepare_out(inv);
  const auto cert = branching::find_s1(spec);
  const auto st = branching::progeny_stats(spec, replicas, seed, cap);
  json doc{{"d", spec.d},
           {"p", spec.p},
           {"pbar", spec.pbar()},
           {"mean_offspring", spec.mean_offspring()},
           {"expected_total_progeny", 1.0 / (1.0 - spec.mean_offspring())},
           {"s1", cert.s1},
           {"C1", cert.C1},
           {"radius", cert.radius},
           {"replicas", replicas},
           {"capped", st.capped},
           {"mean_total_progeny", st.mean()}};
  std::ostringstream csv;
  csv << "n,empirical_tail,bound\n";
  for (std::int64_t n = 1; n <= max_n; ++n) {
    csv << n << ',' << format_double(st.tail(static_cast<std::uint64_t>(n))) << ','
        << format_double(cert.C1 * std::pow(cert.s1, -static_cast<double>(n))) << '\n';
  }
  write_file(dir / "branching.json", doc.dump(2) + "\n");
  write_file(dir / "tail.csv", csv.str());
  out << "branching: mean progeny " << format_double(st.mean()) << ", s1 " << format_double(cert.s1) << " -> "
      << dir.string() << '\n';
  return kExitOk;
}

int cmd_couple(const Invocation& inv, std::ostream& out) {
  const auto cfg = load(inv, keys({{"lambda", "p", "sides", "initial", "eta_initial", "max_rings", "cover_sterile"}}));
  const double lambda = cfg.get_double("lambda", 2.0);
  const double p = cfg.get_double("p", 0.5);
  ModelParams{lambda, 0.0, p, 1.0}.validate(false);
  const auto geometry = std::make_shared<const Geometry>(read_sides(cfg, {100}));
  const double horizon = read_horizon(cfg, 100.0);
  const std::uint64_t seed = cfg.get_u64("seed", 1);
  const Torus xi = parse_config(cfg.get_string("initial", "product(0.5,0,0,0)"), geometry, seed);
  for (SiteIndex x = 0; x < xi.size(); ++x) {
    if (type_of(xi.at(x)) == 2) throw ConfigError("couple: the initial configuration must be single-type");
  }
  coupling::CoupledOptions opt;
  opt.max_rings = cfg.get_u64("max_rings", 0);
  const fs::path dir = prepare_out(inv);
  const auto closure = coupling::verify_table_closure();
  std::ostringstream csv;
  coupling::write_closure_csv(csv, closure);
  write_file(dir / "closure.csv", csv.str());
  if (closure.violations != 0) throw InvariantViolation("coupling table leaves the admissible set");
  auto init = coupling::CoupledConfig::dominating(xi, cfg.get_bool("cover_sterile", true));
  if (cfg.has("eta_initial")) {
    // any occupied site counts as occupied in the dominating process
    const Torus eta = parse_config(cfg.get_string("eta_initial", ""), geometry, seed ^ 0x5bd1e995ULL);
    for (SiteIndex x = 0; x < eta.size(); ++x) init.eta[x] = is_occupied(eta.at(x)) ? 1 : 0;
    for (SiteIndex x = 0; x < eta.size(); ++x) {
      if (!coupling::admissible(init.at(x)))
        throw InvariantViolation("couple: starting pair at site " + std::to_string(x) + " is not admissible");
    }
  }
  const auto run = coupling::run_coupled(lambda, p, init, horizon, seed, opt);
  json doc{{"lambda", lambda},
           {"p", p},
           {"seed", seed},
           {"end_time", run.end_time},
           {"rings", run.rings},
           {"xi_applied", run.xi_applied},
           {"eta_applied", run.eta_applied},
           {"checks", run.checks},
           {"violations", 0},
           {"eta_extinction_time", opt_json(run.eta_extinction_time)},
           {"xi_fertile_extinction_time", opt_json(run.xi_fertile_extinction_time)},
           {"xi_fertile_after_eta_extinction", run.xi_fertile_after_eta_extinction}};
  write_file(dir / "coupled.json", doc.dump(2) + "\n");
  out << "couple: " << run.rings << " rings, " << run.checks << " checks, no escapes -> " << dir.string() << '\n';
  return kExitOk;
}

int cmd_percolate(const Invocation& inv, std::ostream& out) {
  const auto cfg = load(inv, keys({{"graph", "d", "eps", "window", "height", "samples", "max_path"}}));
  const auto g = percolation::OrientedGraph::make(percolation::parse_graph_kind(cfg.get_string("graph", "L1")),
                                                  static_cast<int>(cfg.get_int("d", 1)));
  const double eps = cfg.get_double("eps", 0.1);
  if (!(eps >= 0.0 && eps <= 1.0)) throw ConfigError("eps must lie in [0, 1]");
  percolation::Window w;
  w.radius = static_cast<int>(cfg.get_int("window", 20));
  w.height = static_cast<int>(cfg.get_int("height", w.radius));
  if (w.radius < 1 || w.height < 1) throw ConfigError("window and height must be >= 1");
  if (static_cast<double>(w.size(g.d)) > 5e7) throw ConfigError("window too large");
  const std::size_t samples = read_count(cfg, "samples", 20);
  const std::uint64_t seed = cfg.get_u64("seed", 1);
  const int max_path = static_cast<int>(cfg.get_int("max_path", g.kind == percolation::GraphKind::L2 ? 8 : 0));
  const fs::path dir = prepare_out(inv);

  std::ostringstream csv;
  csv << "sample,level,wet_density\n";
  std::size_t reached_top = 0;
  double top_sum = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const auto field = percolation::sample_field(g, eps, w, experiments::replica_seed(seed, s));
    const auto wet = percolation::wet_set(field);
    for (int level = 0; level <= w.height; ++level) {
      const double dens = percolation::wet_density(field, wet, level);
      csv << s << ',' << level << ',' << format_double(dens) << '\n';
      if (level == w.height) {
        top_sum += dens;
        reached_top += dens > 0.0;
      }
    }
  }
  write_file(dir / "wet.csv", csv.str());

  json doc{{"graph", percolation::to_string(g.kind)},
           {"d", g.d},
           {"eps", eps},
           {"window", w.radius},
           {"height", w.height},
           {"samples", samples},
           {"seed", seed},
           {"mean_top_density", top_sum / static_cast<double>(samples)},
           {"reached_top", reached_top}};
  if (max_path > 0) {
    if (g.kind != percolation::GraphKind::L2) throw ConfigError("max_path applies to L2 only");
    std::ostringstream paths;
    paths << "n,count,bound\n";
    for (int n = 0; n <= max_path; ++n) {
      paths << n << ',' << percolation::count_self_avoiding_paths(g.d, n).str() << ','
            << percolation::BigInt(boost::multiprecision::pow(percolation::BigInt(2 * g.d + 1), static_cast<unsigned>(n))).str()
            << '\n';
    }
    write_file(dir / "paths.csv", paths.str());
  }
  write_file(dir / "percolation.json", doc.dump(2) + "\n");
  out << "percolate: " << samples << " field(s), wet at the top in " << reached_top << " -> " << dir.string() << '\n';
  return kExitOk;
}

experiments::CompetitionSpec competition_spec(const KeyValueConfig& cfg) {
  experiments::CompetitionSpec spec;
  spec.params = read_params(cfg);
  spec.sides = read_sides(cfg, spec.sides);
  spec.initial = cfg.get_string("initial", spec.initial);
  spec.horizon = read_horizon(cfg, spec.horizon);
  spec.replicas = read_count(cfg, "replicas", static_cast<std::int64_t>(spec.replicas));
  spec.seed = cfg.get_u64("seed", spec.seed);
  spec.sample_interval = cfg.get_double("sample_interval", spec.sample_interval);
  if (cfg.has("lambda_c_proxy")) spec.lambda_c_proxy = cfg.get_double("lambda_c_proxy", 0.0);
  spec.threads = read_threads(cfg);
  return spec;
}

int cmd_compete(const Invocation& inv, std::ostream& out, std::ostream& err) {
  const auto cfg = load(inv, keys({kModelKeys}, {"sample_interval", "lambda_c_proxy"}));
  const auto spec = competition_spec(cfg);
  const fs::path dir = prepare_out(inv);
  const auto rep = experiments::run_competition(spec);
  for (const auto& w : rep.warnings) err << "warning: " << w << " (running anyway)\n";
  std::ostringstream nd;
  experiments::write_competition_ndjson(nd, rep);
  write_file(dir / "competition.ndjson", nd.str());
  json ext = json::array();
  for (const auto& r : rep.replicas) ext.push_back(opt_json(r.type2_extinction_time));
  json doc{{"params", params_json(spec.params)},
           {"replicas", spec.replicas},
           {"seed", spec.seed},
           {"type2_extinct", rep.type2_extinct},
           {"type1_alive", rep.type1_alive},
           {"type2_extinction_times", ext},
           {"warnings", rep.warnings}};
  write_file(dir / "summary.json", doc.dump(2) + "\n");
  out << "compete: +-2 extinct in " << rep.type2_extinct << "/" << spec.replicas << ", +-1 alive in "
      << rep.type1_alive << "/" << spec.replicas << " -> " << dir.string() << '\n';
  return kExitOk;
}

int cmd_snapshot(const Invocation& inv, std::ostream& out) {
  const auto cfg = load(inv, keys({kModelKeys}, {"sample_interval", "two_type", "time"}));
  const ModelParams m = read_params(cfg);
  const auto geometry = std::make_shared<const Geometry>(read_sides(cfg, {100, 100}));
  if (geometry->dim() > 2) throw ConfigError("snapshot: 1-d or 2-d tori only");
  const double horizon = read_horizon(cfg, 100.0);
  const double t = cfg.get_double("time", horizon);
  if (!(t >= 0.0 && t <= horizon)) throw ConfigError("time must lie in [0, horizon]");
  const std::uint64_t seed = cfg.get_u64("seed", 1);
  const std::string initial = cfg.get_string("initial", "product(0.5,0,0,0)");
  const Torus init = parse_config(initial, geometry, seed);
  const bool two_type = cfg.get_bool("two_type", m.lambda2 > 0.0 || occupancy(init).of_type(2) > 0);
  RunOptions opt;
  opt.record_events = true;
  opt.sample_interval = cfg.get_double("sample_interval", geometry->dim() == 1 ? 1.0 : 0.0);
  if (!(opt.sample_interval >= 0.0)) throw ConfigError("sample_interval must be >= 0");
  const fs::path dir = prepare_out(inv);
  const Trajectory traj = run_simulation(m, init, horizon, seed, opt);
  const fs::path path = dir / "snapshot.pgm";
  experiments::emit_snapshot(traj, t, path.string(), two_type);
  out << "snapshot: t=" << format_double(t) << " -> " << path.string() << '\n';
  return kExitOk;
}

int cmd_estimate_lambda_c(const Invocation& inv, std::ostream& out) {
  const auto cfg = load(inv, keys({{"sides", "lo", "hi", "iterations", "target"}}));
  const auto sides = read_sides(cfg, {200});
  const double horizon = read_horizon(cfg, 200.0);
  const std::size_t replicas = read_count(cfg, "replicas", 20);
  const std::uint64_t seed = cfg.get_u64("seed", 1);
  const double target = cfg.get_double("target", 0.5);
  if (!(target > 0.0 && target < 1.0)) throw ConfigError("target must lie in (0, 1)");
  const fs::path dir = prepare_out(inv);
  const auto est = experiments::estimate_lambda_c(sides, horizon, replicas, seed, cfg.get_double("lo", 1.0),
                                                  cfg.get_double("hi", 3.0),
                                                  static_cast<int>(cfg.get_int("iterations", 8)), target,
                                                  read_threads(cfg));
  json probes = json::array();
  for (const auto& [l, f] : est.probes) probes.push_back({{"lambda", l}, {"survival_frequency", f}});
  json doc{{"lambda_c_estimate", est.lambda_c},
           {"bracket", {est.lower, est.upper}},
           {"note", "finite-size, finite-horizon estimate"},
           {"sides", sides},
           {"horizon", horizon},
           {"replicas", replicas},
           {"seed", seed},
           {"probes", probes}};
  write_file(dir / "lambda_c.json", doc.dump(2) + "\n");
  out << "estimate-lambda-c: lambda_c ~ " << format_double(est.lambda_c) << " (estimate) -> " << dir.string() << '\n';
  return kExitOk;
}

int cmd_decay(const Invocation& inv, std::ostream& out) {
  const auto cfg = load(inv, keys({{"lambda", "lambda1", "p", "p1", "side", "d", "max_n"}}));
  experiments::DecaySpec spec;
  spec.params = ModelParams{get_alias(cfg, "lambda1", "lambda", 10.0), 0.0, get_alias(cfg, "p1", "p", 0.2), 1.0};
  spec.side = static_cast<int>(cfg.get_int("side", spec.side));
  spec.dimension = static_cast<int>(cfg.get_int("d", 1));
  if (spec.dimension < 1 || spec.dimension > 3) throw ConfigError("d must lie in [1, 3]");
  if (spec.side < 3) throw ConfigError("side must be >= 3");
  spec.replicas = read_count(cfg, "replicas", 10000);
  spec.seed = cfg.get_u64("seed", 1);
  spec.max_n = static_cast<int>(cfg.get_int("max_n", spec.max_n));
  spec.horizon = read_horizon(cfg, spec.horizon);
  spec.threads = read_threads(cfg);
  const fs::path dir = prepare_out(inv);
  const auto rep = experiments::measure_decay(spec);
  std::ostringstream csv;
  experiments::write_decay_csv(csv, rep);
  write_file(dir / "decay.csv", csv.str());
  json doc{{"replicas", spec.replicas},
           {"censored", rep.censored},
           {"space_slope", rep.space_fit.slope},
           {"space_slope_se", rep.space_fit.slope_se},
           {"space_r2", rep.space_fit.r2},
           {"space_fit_points", rep.fit_points_space},
           {"time_slope", rep.time_fit.slope},
           {"time_slope_se", rep.time_fit.slope_se},
           {"time_r2", rep.time_fit.r2},
           {"time_fit_points", rep.fit_points_time}};
  write_file(dir / "decay.json", doc.dump(2) + "\n");
  out << "decay: spatial slope " << format_double(rep.space_fit.slope) << " -> " << dir.string() << '\n';
  return kExitOk;
}

int cmd_block(const Invocation& inv, std::ostream& out) {
  const auto cfg = load(inv, keys({{"lambda", "p", "d", "L"}}));
  experiments::BlockSpec spec;
  spec.lambda = cfg.get_double("lambda", spec.lambda);
  spec.p = cfg.get_double("p", spec.p);
  spec.dimension = static_cast<int>(cfg.get_int("d", 1));
  spec.L = static_cast<int>(cfg.get_int("L", spec.L));
  spec.replicas = read_count(cfg, "replicas", 1000);
  spec.seed = cfg.get_u64("seed", 1);
  spec.threads = read_threads(cfg);
  const fs::path dir = prepare_out(inv);
  const auto rep = experiments::estimate_block_empty(spec);
  json doc{{"lambda", spec.lambda}, {"p", spec.p},           {"d", spec.dimension},
           {"L", spec.L},           {"replicas", rep.replicas}, {"invaded", rep.invaded},
           {"estimate", rep.estimate}, {"Lambda2", rep.Lambda2}, {"entries_within", rep.entries_within},
           {"entries_bound", rep.entries_bound}, {"mean_entries", rep.mean_entries}};
  write_file(dir / "block.json", doc.dump(2) + "\n");
  out << "block: estimate " << format_double(rep.estimate) << " -> " << dir.string() << '\n';
  return kExitOk;
}

int cmd_collections(const Invocation& inv, std::ostream& out) {
  const auto cfg = load(inv, keys({kModelKeys}, {"z", "K", "L", "force_c", "max_rings"}));
  experiments::CollectionSpec spec;
  spec.params = read_params(cfg, false);
  spec.sides = read_sides(cfg, spec.sides);
  spec.initial = cfg.get_string("initial", spec.initial);
  spec.z = static_cast<int>(cfg.get_int("z", 0));
  spec.K = static_cast<int>(cfg.get_int("K", spec.K));
  spec.L = static_cast<int>(cfg.get_int("L", spec.L));
  spec.horizon = read_horizon(cfg, spec.horizon);
  spec.seed = cfg.get_u64("seed", 1);
  spec.force_c = cfg.get_bool("force_c", false);
  spec.max_rings = cfg.get_u64("max_rings", 0);
  const fs::path dir = prepare_out(inv);
  const auto rep = experiments::coupled_collections(spec);
  json doc{{"A", rep.a_holds},
           {"B", rep.b_holds},
           {"C", rep.c_holds},
           {"events", rep.events},
           {"containment_checks", rep.containment_checks},
           {"containment_violations", rep.containment_violations},
           {"first_violation_time", opt_json(rep.first_violation_time)},
           {"eta2_fertile_monotone", rep.eta2_fertile_monotone}};
  write_file(dir / "collections.json", doc.dump(2) + "\n");
  out << "collections: A=" << rep.a_holds << " B=" << rep.b_holds << " C=" << rep.c_holds << " -> " << dir.string()
      << '\n';
  return kExitOk;
}

void add_common(CLI::App* sub, Invocation& inv) {
  sub->add_option("--config", inv.config_path, "key=value settings file")->check(CLI::ExistingFile);
  sub->add_option_function<std::uint64_t>("--seed", [&inv](const std::uint64_t& v) { inv.flags["seed"] = std::to_string(v); },
                                          "base seed (SCP_SEED overrides)");
  sub->add_option_function<std::uint64_t>(
      "--replicas", [&inv](const std::uint64_t& v) { inv.flags["replicas"] = std::to_string(v); }, "replica count");
  sub->add_option_function<std::string>("--horizon", [&inv](const std::string& v) { inv.flags["horizon"] = v; },
                                         "time horizon");
  sub->add_option("--out", inv.out_dir, "output directory");
  sub->add_option("--set", inv.sets, "extra key=value setting (repeatable)");
}

void add_flag(CLI::App* sub, Invocation& inv, const std::string& name, const std::string& key,
              const std::string& help) {
  sub->add_option_function<std::string>(name, [&inv, key](const std::string& v) { inv.flags[key] = v; }, help);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulation and analysis of a two-type contact process with sterile offspring", "scp"};
  app.require_subcommand(1);
  Invocation inv;
  std::map<std::string, std::function<int()>> actions;

  auto sub = [&](const std::string& name, const std::string& help, std::function<int()> fn) {
    CLI::App* s = app.add_subcommand(name, help);
    add_common(s, inv);
    actions[name] = std::move(fn);
    return s;
  };
  sub("simulate", "run the particle system and write NDJSON run records", [&] { return cmd_simulate(inv, out); });
  auto* sweep = sub("sweep", "survival frequencies over a (lambda, p) grid", [&] { return cmd_sweep(inv, out); });
  add_flag(sweep, inv, "--lambda-c", "lambda_c", "lambda_c used for the reference overlay");
  sub("meanfield", "fixed points, spectra and a trajectory of the mean-field ODE", [&] { return cmd_meanfield(inv, out); });
  auto* br = sub("branching", "total progeny of the dominating branching process", [&] { return cmd_branching(inv, out); });
  add_flag(br, inv, "--d", "d", "dimension");
  add_flag(br, inv, "--p", "p", "fertility probability");
  sub("couple", "coupling table closure and a coupled run", [&] { return cmd_couple(inv, out); });
  auto* pc = sub("percolate", "oriented site percolation on L1 or L2", [&] { return cmd_percolate(inv, out); });
  pc->add_option_function<std::string>("--graph", [&inv](const std::string& v) { inv.flags["graph"] = v; }, "L1 or L2")
      ->check(CLI::IsMember({"L1", "L2"}));
  add_flag(pc, inv, "--d", "d", "dimension");
  add_flag(pc, inv, "--eps", "eps", "closed probability");
  add_flag(pc, inv, "--window", "window", "window radius");
  add_flag(pc, inv, "--samples", "samples", "number of fields");
  sub("compete", "two-type competition runs", [&] { return cmd_compete(inv, out, err); });
  sub("snapshot", "PGM image of a configuration", [&] { return cmd_snapshot(inv, out); });
  sub("estimate-lambda-c", "bisection estimate of lambda_c on a finite torus",
      [&] { return cmd_estimate_lambda_c(inv, out); });
  sub("decay", "space and time tails from a single fertile individual", [&] { return cmd_decay(inv, out); });
  sub("block", "block emptiness with a frozen fertile boundary", [&] { return cmd_block(inv, out); });
  sub("collections", "coupled single-type collections on a shared event stream",
      [&] { return cmd_collections(inv, out); });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "scp: " << e.what() << '\n';
    return kExitInvalidConfig;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return actions.at(name)();
  } catch (const ConfigError& e) {
    err << "scp " << name << ": invalid configuration: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const InvariantViolation& e) {
    err << "scp " << name << ": invariant violated: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    err << "scp " << name << ": " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace scp::cli
