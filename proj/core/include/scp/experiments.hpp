#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scp/lattice.hpp"
#include "scp/model.hpp"
#include "scp/stats.hpp"
#include "scp/trajectory.hpp"

namespace scp::experiments {

/// Seed of replica r: base + r.
inline std::uint64_t replica_seed(std::uint64_t base, std::size_t replica) {
  return base + static_cast<std::uint64_t>(replica);
}

// --- phase sweeps -------------------------------------------------------

struct SweepSpec {
  std::vector<ModelParams> points;
  std::vector<int> sides{100};
  /// Survival is read at each of these times (from one run to the largest).
  std::vector<double> horizons{100.0};
  std::size_t replicas = 20;
  std::uint64_t seed_base = 1;
  std::string initial = "product(1,0,0,0)";
  std::optional<double> lambda_c;
  unsigned threads = 0;

  /// Throws ConfigError on an empty grid, zero replicas or bad horizons.
  void validate() const;
};

/// Grid (lambda, p) with lambda2 = 0, in row-major order (lambda outer).
std::vector<ModelParams> single_type_grid(const std::vector<double>& lambdas,
                                          const std::vector<double>& ps);

struct SweepCell {
  ModelParams params;
  double horizon = 0.0;
  std::size_t replicas = 0;
  std::size_t survived = 0;  // fertile count > 0 at the horizon
  stats::Interval wilson;
  double mean_fertile_density = 0.0;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // ordered by (point, horizon)
  int dimension = 1;
  std::optional<double> lambda_c;
};

SweepResult sweep_phase(const SweepSpec& spec);

/// Columns: lambda1,p1,lambda2,p2,horizon,replicas,survived,frequency,
/// wilson_lo,wilson_hi,mean_fertile_density,lambda_p,ref_lambda_p_1,
/// ref_lambda_c,ref_p_quarter_d. The ref_ columns say on which side of
/// each reference curve the point lies ("below"/"above"/"on", "na" when no
/// lambda_c was given).
void write_sweep_csv(std::ostream& out, const SweepResult& result);

struct LambdaCEstimate {
  double lambda_c = 0.0;  // an estimate from finite runs
  double lower = 0.0;
  double upper = 0.0;
  std::vector<std::pair<double, double>> probes;  // (lambda, survival frequency)
};

/// Bisection on lambda for the p = 1 process: survival frequency at the
/// horizon above `target` moves the upper end down.
LambdaCEstimate estimate_lambda_c(const std::vector<int>& sides, double horizon, std::size_t replicas,
                                  std::uint64_t seed, double lo, double hi, int iterations,
                                  double target = 0.5, unsigned threads = 0);

// --- decay from a single fertile individual ------------------------------

struct DecaySpec {
  ModelParams params;  // single type
  int side = 201;
  int dimension = 1;
  std::size_t replicas = 10000;
  std::uint64_t seed = 1;
  int max_n = 30;
  double horizon = 1000.0;
  unsigned threads = 0;
};

struct DecayRow {
  int n = 0;
  double space_tail = 0.0;   // P(max fertile radius > n)
  double time_tail = 0.0;    // P(fertile lifetime > n)
  double escape = 0.0;       // P(fertile population leaves [-n,n]^d x [0,n])
  double bound = 0.0;        // C1 s1^-n + C1 s1^-n/2 + (e/2)^-n/2
};

struct DecayReport {
  std::vector<DecayRow> rows;
  stats::LinearFit space_fit;  // log tail against n over rows with enough hits
  stats::LinearFit time_fit;
  std::size_t fit_points_space = 0;
  std::size_t fit_points_time = 0;
  std::vector<int> radius;          // per replica
  std::vector<double> lifetime;     // per replica, fertile extinction time
  std::vector<std::uint64_t> fertile_total;  // fertile individuals ever present
  std::size_t censored = 0;         // replicas still fertile at the horizon
};

/// Throws ConfigError unless 4 d p < 1 (the tail is not defined otherwise).
DecayReport measure_decay(const DecaySpec& spec);
void write_decay_csv(std::ostream& out, const DecayReport& report);

// --- block emptiness ------------------------------------------------------

struct BlockSpec {
  double lambda = 10.0;
  double p = 0.2;
  int dimension = 1;
  int L = 5;
  std::size_t replicas = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

struct BlockReport {
  std::size_t replicas = 0;
  std::size_t invaded = 0;          // occupied site seen in A
  double estimate = 0.0;
  double Lambda2 = 0.0;             // 4 d L (4L+1)^{d-1}
  std::size_t entries_within = 0;   // replicas with entry count <= 2 Lambda2
  double entries_bound = 0.0;       // 1 - (4/e)^{-Lambda2}
  double mean_entries = 0.0;
};

/// B = [-2L, 2L]^d x [0, 2L] starts full of fertile individuals, and the
/// sites at sup-distance 2L+1 stay fertile forever and push a fertile
/// individual into every empty periphery site their arrows reach. Estimates
/// P(some site of [-L, L]^d is occupied during [L, 2L]).
BlockReport estimate_block_empty(const BlockSpec& spec);

// --- competition ----------------------------------------------------------

struct CompetitionSpec {
  ModelParams params;
  std::vector<int> sides{500};
  std::string initial = "product(0.3,0,0.3,0)";
  double horizon = 500.0;
  std::size_t replicas = 20;
  std::uint64_t seed = 1;
  double sample_interval = 10.0;
  /// Regime checks use this stand-in for lambda_c; unchecked when absent.
  std::optional<double> lambda_c_proxy;
  unsigned threads = 0;
};

struct CompetitionReplica {
  std::uint64_t seed = 0;
  std::vector<Sample> series;
  bool type2_extinct = false;  // no +-2 at the horizon
  bool type1_alive = false;    // some +-1 at the horizon
  std::optional<double> type2_extinction_time;
};

struct CompetitionReport {
  std::vector<CompetitionReplica> replicas;
  std::size_t type2_extinct = 0;
  std::size_t type1_alive = 0;
  std::vector<std::string> warnings;
};

CompetitionReport run_competition(const CompetitionSpec& spec);
/// Per-replica NDJSON: {"seed":..,"t":..,"counts":[..]} per sample.
void write_competition_ndjson(std::ostream& out, const CompetitionReport& report);

// --- coupled single-type collections -------------------------------------

struct CollectionSpec {
  ModelParams params;
  std::vector<int> sides{500};
  std::string initial = "product(0.3,0,0.3,0)";
  int z = 0;  // base site along the first axis
  int K = 10;
  int L = 4;
  double horizon = 64.0;
  std::uint64_t seed = 1;
  /// Clear +-2 from 2zL + [-KL, KL]^d before starting, so C_z holds.
  bool force_c = false;
  std::uint64_t max_rings = 0;
};

struct CollectionReport {
  bool c_holds = false;           // no +-2 in 2zL + [-KL, KL]^d at time 0
  bool a_holds = false;           // killed process alive at the horizon
  bool b_holds = true;            // eta^{z,2} never met nabla_z
  std::uint64_t events = 0;       // rings processed
  std::uint64_t containment_checks = 0;
  std::uint64_t containment_violations = 0;
  std::optional<double> first_violation_time;
  std::vector<std::size_t> eta2_fertile_series;  // after each applied eta^{z,2} event
  bool eta2_fertile_monotone = true;
};

/// Runs xi, eta^{z,1}, the cone-killed eta^{z,1} and eta^{z,2} on one
/// graphical representation. Throws ConfigError when the cone or the
/// window 2zL + [-KL, KL]^d does not fit in the torus.
CollectionReport coupled_collections(const CollectionSpec& spec);

// --- snapshots ------------------------------------------------------------

/// P2 image. Single-type levels: fertile 0, sterile 128, empty 255.
/// With `two_type`: +1 -> 0, -1 -> 64, +2 -> 160, -2 -> 208, empty 255.
/// A 2-d torus is drawn as rows = first axis. Returns the PGM text.
std::string pgm_image(const Torus& cfg, bool two_type, const std::string& comment);

/// Space-time raster of a 1-d trajectory: one row per stored snapshot.
std::string pgm_raster(const std::vector<Torus>& rows, bool two_type, const std::string& comment);

/// Writes the configuration at time t as a PGM file. 2-d trajectories give
/// a plain image; 1-d ones a raster of the stored snapshots up to t.
/// Throws ConfigError for an unwritable path or a missing time.
void emit_snapshot(const Trajectory& traj, double t, const std::string& path, bool two_type);

double mean_gray_level(const std::string& pgm);

}  // namespace scp::experiments
