#pragma once

#include <cstdint>

#include "scp/lattice.hpp"
#include "scp/model.hpp"
#include "scp/trajectory.hpp"

namespace scp {

/// Exact simulation from the graphical representation: arrows and death
/// marks are read from an EventScheduler and applied in time order.
/// Requires finite birth rates. Deterministic in (params, init, horizon, seed).
Trajectory run_graphical(const ModelParams& params, const Torus& init, double horizon,
                         std::uint64_t seed, const RunOptions& options = {});

/// Aggregated-rate simulation: the next event happens after an exponential
/// time with rate #occupied + sum_i lambda_i #(+i); a death picks a uniform
/// occupied site, a birth picks a uniform +i site, a uniform neighbor and a
/// fertile/sterile offspring, and succeeds only onto an empty site.
/// Same law as run_graphical, different random stream.
Trajectory run_gillespie(const ModelParams& params, const Torus& init, double horizon,
                         std::uint64_t seed, const RunOptions& options = {});

/// How empty sites next to fertile individuals of an infinite-rate type are
/// filled after each event.
enum class CascadeOrder {
  /// Repeatedly pick a uniform (empty site, infinite-rate fertile neighbor) pair.
  uniform_pairs,
  /// Pick a uniform empty frontier site, then a uniform eligible neighbor.
  uniform_sites,
};

/// Simulation with lambda_i = infinity for at least one type. Finite-rate
/// arrows and death marks drive the process; after every applied event (and
/// at time 0) a cascade fills, one pair at a time in the chosen random
/// order, every empty site that has a fertile neighbor of an infinite-rate
/// type, until no such site remains. The filled site becomes +i with
/// probability p_i and -i otherwise, i being the type of the chosen parent.
Trajectory run_infinite_rate(const ModelParams& params, const Torus& init, double horizon,
                             std::uint64_t seed, const RunOptions& options = {},
                             CascadeOrder order = CascadeOrder::uniform_pairs);

/// Dispatches to run_infinite_rate when a rate is infinite, run_graphical otherwise.
Trajectory run_simulation(const ModelParams& params, const Torus& init, double horizon,
                          std::uint64_t seed, const RunOptions& options = {});

}  // namespace scp
