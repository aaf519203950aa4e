#include "scp/percolation.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "scp/errors.hpp"
#include "scp/event_scheduler.hpp"
#include "scp/model.hpp"
#include "scp/rng.hpp"

namespace scp::percolation {

const char* to_string(GraphKind k) noexcept { return k == GraphKind::L1 ? "L1" : "L2"; }

GraphKind parse_graph_kind(const std::string& s) {
  if (s == "L1") return GraphKind::L1;
  if (s == "L2") return GraphKind::L2;
  throw ConfigError("unknown graph '" + s + "' (expected L1 or L2)");
}

OrientedGraph OrientedGraph::make(GraphKind kind, int d) {
  if (d < 1 || d > kMaxDim) throw ConfigError("graph dimension must lie in [1, 3]");
  return {kind, d};
}

bool OrientedGraph::contains(const Point& x) const noexcept {
  if (x.n < 0) return false;
  for (int i = d; i < kMaxDim; ++i) {
    if (x.m[static_cast<std::size_t>(i)] != 0) return false;
  }
  if (kind == GraphKind::L2) return true;
  long sum = x.n;
  for (int i = 0; i < d; ++i) sum += x.m[static_cast<std::size_t>(i)];
  return sum % 2 == 0;
}

std::vector<Point> OrientedGraph::successors(const Point& x) const {
  if (!contains(x)) throw ConfigError("point is not a site of the graph (parity or level)");
  std::vector<Point> out;
  for (int i = 0; i < d; ++i) {
    for (int delta : {-1, 1}) {
      Point y = x;
      y.m[static_cast<std::size_t>(i)] += delta;
      if (kind == GraphKind::L1) y.n += 1;
      out.push_back(y);
    }
  }
  if (kind == GraphKind::L2) {
    Point up = x;
    up.n += 1;
    out.push_back(up);
  }
  return out;
}

std::size_t Window::size(int d) const noexcept {
  std::size_t s = static_cast<std::size_t>(height + 1);
  for (int i = 0; i < d; ++i) s *= static_cast<std::size_t>(2 * radius + 1);
  return s;
}

bool Window::contains(int d, const Point& x) const noexcept {
  if (x.n < 0 || x.n > height) return false;
  for (int i = 0; i < d; ++i) {
    if (std::abs(x.m[static_cast<std::size_t>(i)]) > radius) return false;
  }
  return true;
}

std::size_t Window::index(int d, const Point& x) const noexcept {
  std::size_t idx = static_cast<std::size_t>(x.n);
  const auto side = static_cast<std::size_t>(2 * radius + 1);
  for (int i = 0; i < d; ++i) {
    idx = idx * side + static_cast<std::size_t>(x.m[static_cast<std::size_t>(i)] + radius);
  }
  return idx;
}

Point Window::point(int d, std::size_t idx) const noexcept {
  Point x;
  const auto side = static_cast<std::size_t>(2 * radius + 1);
  for (int i = d - 1; i >= 0; --i) {
    x.m[static_cast<std::size_t>(i)] = static_cast<int>(idx % side) - radius;
    idx /= side;
  }
  x.n = static_cast<int>(idx);
  return x;
}

SiteField sample_field(const OrientedGraph& g, double eps, const Window& window, std::uint64_t seed) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw ConfigError("eps must lie in [0,1]");
  if (window.radius < 0 || window.height < 0) throw ConfigError("window must be nonempty");
  SiteField f{g, window, std::vector<std::uint8_t>(window.size(g.d), 0)};
  for (std::size_t i = 0; i < f.open.size(); ++i) {
    if (!g.contains(window.point(g.d, i))) continue;
    CounterRng rng(seed, stream_key(StreamDomain::percolation, i));
    f.open[i] = rng.uniform() >= eps;
  }
  return f;
}

std::vector<std::uint8_t> wet_set(const SiteField& field) {
  const int d = field.graph.d;
  std::vector<std::uint8_t> wet(field.open.size(), 0);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < field.open.size(); ++i) {
    if (field.open[i] && field.window.point(d, i).n == 0) {
      wet[i] = 1;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    const Point x = field.window.point(d, queue.front());
    queue.pop_front();
    for (const Point& y : field.graph.successors(x)) {
      if (!field.is_open(y)) continue;
      const std::size_t j = field.window.index(d, y);
      if (wet[j]) continue;
      wet[j] = 1;
      queue.push_back(j);
    }
  }
  return wet;
}

double wet_density(const SiteField& field, const std::vector<std::uint8_t>& wet, int level) {
  std::size_t sites = 0, count = 0;
  for (std::size_t i = 0; i < wet.size(); ++i) {
    const Point x = field.window.point(field.graph.d, i);
    if (x.n != level || !field.graph.contains(x)) continue;
    ++sites;
    count += wet[i];
  }
  return sites == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(sites);
}

namespace {

void check_path_budget(int d, int n) {
  if (d < 1 || d > kMaxDim) throw ConfigError("dimension must lie in [1, 3]");
  if (n < 0) throw ConfigError("path length must be >= 0");
  const int budget = d <= 2 ? 14 : 10;
  if (n > budget) {
    throw ConfigError("path length " + std::to_string(n) + " exceeds the enumeration budget " +
                      std::to_string(budget) + " for d=" + std::to_string(d));
  }
}

struct WalkCounter {
  int d;
  int n;
  int side;
  std::vector<std::uint8_t> visited;
  std::vector<std::uint64_t> counts;

  std::size_t offset(int axis) const {
    std::size_t o = 1;
    for (int i = 0; i < axis; ++i) o *= static_cast<std::size_t>(side);
    return o;
  }

  void walk(std::size_t at, int steps) {
    ++counts[static_cast<std::size_t>(steps)];
    if (steps == n) return;
    for (int axis = 0; axis < d; ++axis) {
      const std::size_t o = offset(axis);
      for (std::size_t next : {at - o, at + o}) {
        if (visited[next]) continue;
        visited[next] = 1;
        walk(next, steps + 1);
        visited[next] = 0;
      }
    }
  }
};

}  // namespace

std::vector<BigInt> self_avoiding_walks(int d, int n) {
  check_path_budget(d, n);
  // A walk of n steps stays within n of the origin; one extra layer keeps
  // index arithmetic in range.
  WalkCounter wc{d, n, 2 * n + 3, {}, std::vector<std::uint64_t>(static_cast<std::size_t>(n) + 1, 0)};
  std::size_t cells = 1, origin = 0;
  for (int i = 0; i < d; ++i) {
    origin += static_cast<std::size_t>(n + 1) * cells;
    cells *= static_cast<std::size_t>(wc.side);
  }
  wc.visited.assign(cells, 0);
  wc.visited[origin] = 1;
  wc.walk(origin, 0);
  std::vector<BigInt> out;
  for (auto c : wc.counts) out.emplace_back(c);
  return out;
}

BigInt count_self_avoiding_paths(int d, int n) {
  check_path_budget(d, n);
  const auto c = self_avoiding_walks(d, n);
  // a_k = c_k + sum_{l<k} c_l a_{k-1-l}: the last vertical step splits off
  // a final horizontal walk.
  std::vector<BigInt> a(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    BigInt s = c[static_cast<std::size_t>(k)];
    for (int l = 0; l < k; ++l) {
      s += c[static_cast<std::size_t>(l)] * a[static_cast<std::size_t>(k - 1 - l)];
    }
    a[static_cast<std::size_t>(k)] = s;
  }
  return a[static_cast<std::size_t>(n)];
}

PathTail closed_path_tail(int d, double log_eps, int n, int k) {
  if (d < 1 || d > kMaxDim) throw ConfigError("dimension must lie in [1, 3]");
  if (n < 0 || k < 0) throw ConfigError("path length and dependence range must be >= 0");
  if (log_eps > 0.0) throw ConfigError("eps must lie in [0,1]");
  PathTail out;
  if (n == 0) {
    out.log_bound = 0.0;
    out.bound = 1.0;
    return out;
  }
  const double block = std::pow(2.0 * k + 1.0, d + 1);
  out.log_bound = n * std::log(2.0 * d + 1.0) + (n / block) * log_eps;
  out.bound = std::exp(std::min(0.0, out.log_bound));
  return out;
}

namespace {

bool closed_walk_from(const Point& x, int remaining, int d, double eps, std::uint64_t seed,
                      std::uint64_t sample, const Window& w, std::vector<std::uint8_t>& visited) {
  if (remaining == 0) return true;
  const OrientedGraph g{GraphKind::L2, d};
  for (const Point& y : g.successors(x)) {
    if (!w.contains(d, y)) continue;
    const std::size_t j = w.index(d, y);
    if (visited[j]) continue;
    CounterRng rng(seed, stream_key(StreamDomain::percolation, j, sample + 1));
    if (!(rng.uniform() < eps)) continue;
    visited[j] = 1;
    const bool found = closed_walk_from(y, remaining - 1, d, eps, seed, sample, w, visited);
    visited[j] = 0;
    if (found) return true;
  }
  return false;
}

}  // namespace

double closed_path_mc(int d, double eps, int n, std::size_t samples, std::uint64_t seed) {
  if (d < 1 || d > kMaxDim) throw ConfigError("dimension must lie in [1, 3]");
  if (!(eps >= 0.0 && eps <= 1.0)) throw ConfigError("eps must lie in [0,1]");
  if (n < 0) throw ConfigError("path length must be >= 0");
  if (samples == 0) return 0.0;
  const Window w{n, n};
  std::vector<std::uint8_t> visited(w.size(d), 0);
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Point origin{};
    const std::size_t o = w.index(d, origin);
    CounterRng rng(seed, stream_key(StreamDomain::percolation, o, s + 1));
    if (!(rng.uniform() < eps)) continue;
    visited[o] = 1;
    hits += closed_walk_from(origin, n, d, eps, seed, s, w, visited);
    visited[o] = 0;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

ContourConstants contour_constant(int d) {
  if (d < 1 || d > kMaxDim) throw ConfigError("dimension must lie in [1, 3]");
  ContourConstants c;
  const unsigned e2 = static_cast<unsigned>(std::pow(5, d + 1));
  c.eps1 = Rational(BigInt(1), boost::multiprecision::pow(BigInt(6), 4 * 13 * 13));
  c.eps2 = Rational(BigInt(1), boost::multiprecision::pow(BigInt(4 * d + 2), e2));
  c.log_eps1 = -4.0 * 13 * 13 * std::log(6.0);
  c.log_eps2 = -static_cast<double>(e2) * std::log(4.0 * d + 2.0);
  return c;
}

std::string to_text(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

BigInt parse_integer(const std::string& s) {
  std::size_t start = s.size() > 0 && s[0] == '-' ? 1 : 0;
  if (start == s.size()) throw ConfigError("malformed integer '" + s + "'");
  for (std::size_t i = start; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw ConfigError("malformed integer '" + s + "'");
  }
  return BigInt(s);
}

}  // namespace

Rational rational_from_text(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(parse_integer(s));
  const BigInt num = parse_integer(s.substr(0, slash));
  const BigInt den = parse_integer(s.substr(slash + 1));
  if (den == 0) throw ConfigError("zero denominator in '" + s + "'");
  return Rational(num, den);
}

SterileArrowProbability sterile_arrow_probability(double lambda, double p, int L, int d) {
  if (!(lambda >= 0.0) || std::isinf(lambda)) throw ConfigError("lambda must be finite and >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0,1]");
  if (L < 1) throw ConfigError("L must be >= 1");
  if (d < 1 || d > kMaxDim) throw ConfigError("dimension must lie in [1, 3]");
  SterileArrowProbability out;
  out.Lambda1 = lambda * std::pow(6.0 * L + 1.0, d) * static_cast<double>(L) * L;
  out.probability = std::exp(-out.Lambda1 * (1.0 - p));
  const double log_eps1 = contour_constant(1).log_eps1;
  // ln(1 - eps1/2) = -eps1/2 to far below double resolution.
  out.p_plus = 1.0 + std::log1p(-std::exp(log_eps1) / 2.0) / out.Lambda1;
  out.log_one_minus_p_plus = log_eps1 - std::log(2.0) - std::log(out.Lambda1);
  return out;
}

SterileArrowSample sample_sterile_arrows(double lambda, double p, int L, int d, std::size_t blocks,
                                         std::uint64_t seed) {
  sterile_arrow_probability(lambda, p, L, d);  // argument checks
  const auto geometry = std::make_shared<const Geometry>(std::vector<int>(static_cast<std::size_t>(d), 6 * L + 1));
  const ModelParams params{lambda, 0.0, p, 1.0};
  const double t_end = static_cast<double>(L) * L;
  SterileArrowSample out;
  out.blocks = blocks;
  double total = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const EventScheduler sched(geometry, params, splitmix64(seed ^ splitmix64(b + 1)));
    std::size_t count = 0;
    for (SiteIndex x = 0; x < geometry->size(); ++x) {
      for (int e = 0; e < geometry->degree(); ++e) {
        count += sched.arrivals(sched.clock_id(x, EventKind::arrow_sterile1, e), 0.0, t_end).size();
      }
    }
    total += static_cast<double>(count);
    out.zero_blocks += count == 0;
  }
  out.mean_count = blocks == 0 ? 0.0 : total / static_cast<double>(blocks);
  return out;
}

namespace {

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long ceil_div(long a, long b) { return -floor_div(-a, b); }

}  // namespace

bool Cone::in_nabla_z1(const Point& x) const noexcept {
  if (x.n < 0) return false;
  long sum = x.n;
  for (int i = 0; i < d; ++i) {
    const auto a = static_cast<std::size_t>(i);
    if (std::abs(x.m[a] - 2 * z[a]) > x.n) return false;
    sum += x.m[a];
  }
  return sum % 2 == 0;
}

bool Cone::in_nabla_z(const std::array<int, kMaxDim>& x, double t) const noexcept {
  if (!(t >= 0.0)) return false;
  const double LL = static_cast<double>(L) * L;
  const long n0 = static_cast<long>(std::floor(t / LL));
  for (long n = n0; n >= std::max(0L, n0 - 1); --n) {
    if (t < static_cast<double>(n) * LL || t > static_cast<double>(n + 1) * LL) continue;
    bool all_nonempty = true, free_parity = false;
    long parity = n;
    for (int i = 0; i < d && all_nonempty; ++i) {
      const auto a = static_cast<std::size_t>(i);
      const long lo = std::max(ceil_div(x[a] - 3L * L, L), 2L * z[a] - n);
      const long hi = std::min(floor_div(x[a] + 3L * L, L), 2L * z[a] + n);
      if (lo > hi) all_nonempty = false;
      else if (hi > lo) free_parity = true;
      else parity += lo;
    }
    if (!all_nonempty) continue;
    if (free_parity || parity % 2 == 0) return true;
  }
  return false;
}

bool Cone::in_nabla_z2(const Point& x) const noexcept {
  if (x.n < 0) return false;
  std::array<int, kMaxDim> scaled{};
  for (int i = 0; i < d; ++i) scaled[static_cast<std::size_t>(i)] = x.m[static_cast<std::size_t>(i)] * L;
  return in_nabla_z(scaled, static_cast<double>(x.n) * L);
}

}  // namespace scp::percolation
