#include "scp/branching.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "scp/errors.hpp"

namespace scp::branching {

GWSpec GWSpec::make(int d, double p) {
  if (d < 1) throw ConfigError("branching dimension must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("branching p must lie in [0,1]");
  return GWSpec{d, p};
}

std::uint64_t sample_N(const GWSpec& spec, CounterRng& rng) {
  std::geometric_distribution<std::uint64_t> geo(spec.pbar());
  return geo(rng);
}

double pgf_N(const GWSpec& spec, double s) {
  const double a = 1.0 - spec.pbar();
  if (!(a * s < 1.0)) throw ConfigError("pgf_N evaluated at or beyond its pole");
  return spec.pbar() / (1.0 - a * s);
}

std::uint64_t sample_Y(const GWSpec& spec, CounterRng& rng) {
  const std::uint64_t trials = 2 * static_cast<std::uint64_t>(spec.d) + sample_N(spec, rng);
  std::binomial_distribution<std::uint64_t> bin(trials, spec.p);
  return bin(rng);
}

double pgf_Y(const GWSpec& spec, double s) {
  const double w = spec.p * s + (1.0 - spec.p);
  const double a = 1.0 - spec.pbar();
  if (!(a * w < 1.0)) throw ConfigError("pgf_Y evaluated at or beyond its pole");
  return spec.pbar() * std::pow(w, 2 * spec.d) / (1.0 - a * w);
}

std::optional<double> pgf_X(const GWSpec& spec, double s, std::size_t max_iterations) {
  const double a = 1.0 - spec.pbar();
  double x = 0.0;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    const double w = spec.p * x + (1.0 - spec.p);
    if (!(a * w < 1.0)) return std::nullopt;
    const double next = s * spec.pbar() * std::pow(w, 2 * spec.d) / (1.0 - a * w);
    if (!std::isfinite(next)) return std::nullopt;
    if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(next))) return next;
    x = next;
  }
  return std::nullopt;
}

TailCertificate find_s1(const GWSpec& spec) {
  if (!spec.subcritical()) throw ConfigError("find_s1 needs 4dp < 1");
  if (spec.p == 0.0) {
    // X = 1 surely: G_X(s) = s for every s, any s1 works.
    return {1e6, 1e6, std::numeric_limits<double>::infinity()};
  }
  double lo = 1.0, hi = 1.0;
  double step = 1e-3;
  while (true) {
    hi = 1.0 + step;
    if (!pgf_X(spec, hi)) break;
    lo = hi;
    step *= 2.0;
    if (step > 1e6) throw InvariantViolation("pgf_X converges on an unbounded range");
  }
  for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pgf_X(spec, mid)) lo = mid; else hi = mid;
  }
  TailCertificate cert;
  cert.radius = lo;
  cert.s1 = lo - 1e-3 > 1.0 ? lo - 1e-3 : 1.0 + 0.5 * (lo - 1.0);
  const auto c = pgf_X(spec, cert.s1);
  if (!c) throw InvariantViolation("pgf_X diverges below the located radius");
  cert.C1 = *c;
  return cert;
}

ProgenySample simulate_total_progeny(const GWSpec& spec, std::uint64_t seed, std::uint64_t replica,
                                     std::uint64_t cap) {
  CounterRng rng(seed, stream_key(StreamDomain::branching, replica));
  ProgenySample out;
  std::uint64_t generation = 1;
  const auto two_d = 2 * static_cast<std::uint64_t>(spec.d);
  while (generation > 0) {
    // The 2dZ + N_1 + ... + N_Z attempts of a whole generation at once.
    std::negative_binomial_distribution<std::uint64_t> extra(generation, spec.pbar());
    const std::uint64_t trials = two_d * generation + extra(rng);
    std::binomial_distribution<std::uint64_t> children(trials, spec.p);
    generation = children(rng);
    out.count += generation;
    if (out.count >= cap) {
      out.count = cap;
      out.capped = true;
      break;
    }
  }
  return out;
}

double ProgenyStats::tail(std::uint64_t n) const {
  const std::size_t total = samples.size() + capped;
  if (total == 0) return 0.0;
  std::size_t above = capped;
  for (auto x : samples) above += x > n ? 1 : 0;
  return static_cast<double>(above) / static_cast<double>(total);
}

double ProgenyStats::mean() const {
  if (samples.empty()) return 0.0;
  double s = 0.0;
  for (auto x : samples) s += static_cast<double>(x);
  return s / static_cast<double>(samples.size());
}

ProgenyStats progeny_stats(const GWSpec& spec, std::size_t replicas, std::uint64_t seed,
                           std::uint64_t cap) {
  ProgenyStats st;
  st.samples.reserve(replicas);
  for (std::size_t r = 0; r < replicas; ++r) {
    const auto x = simulate_total_progeny(spec, seed, r, cap);
    if (x.capped) ++st.capped; else st.samples.push_back(x.count);
  }
  return st;
}

LifespanTail lifespan_sum_tail(std::uint64_t k, double n, std::size_t samples, std::uint64_t seed) {
  if (static_cast<double>(k) > n / 2.0) throw ConfigError("lifespan tail needs k <= n/2");
  LifespanTail out;
  out.bound = std::pow(std::exp(1.0) / 2.0, -n / 2.0);
  if (k == 0 || samples == 0) return out;
  CounterRng rng(seed, stream_key(StreamDomain::branching, 0, k + 1));
  std::gamma_distribution<double> total(static_cast<double>(k), 1.0);
  std::size_t above = 0;
  for (std::size_t i = 0; i < samples; ++i) above += total(rng) > n ? 1 : 0;
  out.mc = static_cast<double>(above) / static_cast<double>(samples);
  return out;
}

std::vector<Rational> offspring_pmf_exact(int d, const Rational& p, std::size_t kmax) {
  if (d < 1) throw ConfigError("branching dimension must be >= 1");
  if (p < 0 || p > 1) throw ConfigError("branching p must lie in [0,1]");
  // G_Y(s) = pbar (q + p s)^{2d} c / (1 - r s), c = 1/(1 - a q), r = a p c, a = 1 - pbar.
  const Rational pbar(1, 2 * d + 1);
  const Rational a = 1 - pbar;
  const Rational q = 1 - p;
  const Rational c = 1 / (1 - a * q);
  const Rational r = a * p * c;
  const int m = 2 * d;
  std::vector<Rational> binom_row(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i <= m; ++i) {
    boost::multiprecision::cpp_int b = 1;
    for (int j = 0; j < i; ++j) b = b * (m - j) / (j + 1);
    Rational pi = 1, qi = 1;
    for (int j = 0; j < i; ++j) pi *= p;
    for (int j = 0; j < m - i; ++j) qi *= q;
    binom_row[static_cast<std::size_t>(i)] = Rational(b) * pi * qi;
  }
  std::vector<Rational> rpow(kmax + 1);
  rpow[0] = 1;
  for (std::size_t j = 1; j <= kmax; ++j) rpow[j] = rpow[j - 1] * r;
  std::vector<Rational> pmf(kmax + 1);
  for (std::size_t k = 0; k <= kmax; ++k) {
    Rational sum = 0;
    for (int i = 0; i <= m && static_cast<std::size_t>(i) <= k; ++i) {
      sum += binom_row[static_cast<std::size_t>(i)] * rpow[k - static_cast<std::size_t>(i)];
    }
    pmf[k] = pbar * c * sum;
  }
  return pmf;
}

}  // namespace scp::branching
