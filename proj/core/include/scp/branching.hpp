#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "scp/rng.hpp"

namespace scp::branching {

using Rational = boost::multiprecision::cpp_rational;

/// Offspring law of the dominating Galton-Watson process: each fertile
/// individual makes 2d + N attempts, N shifted geometric with success
/// probability pbar = 1/(2d+1), and each attempt is a fertile child with
/// probability p.
struct GWSpec {
  int d = 1;
  double p = 0.0;

  /// Throws ConfigError for d < 1 or p outside [0,1].
  static GWSpec make(int d, double p);

  double pbar() const noexcept { return 1.0 / (2.0 * d + 1.0); }
  double mean_offspring() const noexcept { return 4.0 * d * p; }
  bool subcritical() const noexcept { return mean_offspring() < 1.0; }
};

std::uint64_t sample_N(const GWSpec& spec, CounterRng& rng);
/// pbar / (1 - (1 - pbar) s); throws ConfigError at or beyond the pole.
double pgf_N(const GWSpec& spec, double s);

std::uint64_t sample_Y(const GWSpec& spec, CounterRng& rng);
/// pbar (ps+q)^{2d} / (1 - (1 - pbar)(ps+q)); throws ConfigError at or beyond the pole.
double pgf_Y(const GWSpec& spec, double s);

/// Minimal solution of x = s G_Y(x) by iteration from 0. Returns nullopt
/// when the iteration diverges, hits the pole of G_Y or does not settle
/// within `max_iterations`.
std::optional<double> pgf_X(const GWSpec& spec, double s, std::size_t max_iterations = 2'000'000);

struct TailCertificate {
  double s1 = 1.0;
  double C1 = 1.0;
  /// Largest s found with a convergent iteration, before the safety margin.
  double radius = 1.0;
};

/// A pair with P(X > n) <= C1 s1^{-n}: bisection for the edge of the
/// convergence domain of G_X, minus a margin of 1e-3. Throws ConfigError
/// unless 4dp < 1.
TailCertificate find_s1(const GWSpec& spec);

struct ProgenySample {
  std::uint64_t count = 1;
  bool capped = false;
};

inline constexpr std::uint64_t kProgenyCap = 10'000'000;

/// Total number of individuals ever born, ancestor included, simulated one
/// generation at a time. Stops with capped = true once the count reaches `cap`.
ProgenySample simulate_total_progeny(const GWSpec& spec, std::uint64_t seed, std::uint64_t replica,
                                     std::uint64_t cap = kProgenyCap);

struct ProgenyStats {
  std::vector<std::uint64_t> samples;  // uncapped samples only
  std::size_t capped = 0;

  /// Fraction of all samples (capped ones counted as > n) with X > n.
  double tail(std::uint64_t n) const;
  double mean() const;
};

ProgenyStats progeny_stats(const GWSpec& spec, std::size_t replicas, std::uint64_t seed,
                           std::uint64_t cap = kProgenyCap);

struct LifespanTail {
  double bound = 0.0;
  double mc = 0.0;
};

/// T = sum of k independent unit exponentials. Returns (e/2)^{-n/2} and the
/// Monte Carlo estimate of P(T > n). Throws ConfigError when k > n/2.
LifespanTail lifespan_sum_tail(std::uint64_t k, double n, std::size_t samples, std::uint64_t seed);

/// P(Y = k) for k = 0..kmax as exact rationals, from the power series of G_Y.
std::vector<Rational> offspring_pmf_exact(int d, const Rational& p, std::size_t kmax);

}  // namespace scp::branching
