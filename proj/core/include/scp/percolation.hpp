#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace scp::percolation {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kMaxDim = 3;

/// Space-time site (m, n) with m in Z^d (unused trailing axes are 0).
struct Point {
  std::array<int, kMaxDim> m{};
  int n = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

enum class GraphKind { L1, L2 };
const char* to_string(GraphKind k) noexcept;
GraphKind parse_graph_kind(const std::string& s);

/// L1: sites with m_1 + ... + m_d + n even, arrows (m, n) -> (m', n + 1)
/// with |m - m'|_1 = 1. L2: all of Z^d x N, arrows to the 2d horizontal
/// neighbors at the same level and one step up.
struct OrientedGraph {
  GraphKind kind = GraphKind::L1;
  int d = 1;

  /// Throws ConfigError for d outside [1, 3].
  static OrientedGraph make(GraphKind kind, int d);

  bool contains(const Point& x) const noexcept;
  /// Throws ConfigError when x is not a site of the graph.
  std::vector<Point> successors(const Point& x) const;
};

inline std::vector<Point> graph_arrows(const OrientedGraph& g, const Point& x) {
  return g.successors(x);
}

/// Box [-radius, radius]^d x {0, ..., height}.
struct Window {
  int radius = 0;
  int height = 0;

  std::size_t size(int d) const noexcept;
  bool contains(int d, const Point& x) const noexcept;
  std::size_t index(int d, const Point& x) const noexcept;
  Point point(int d, std::size_t index) const noexcept;
};

/// Independent open/closed field over a window; points that are not sites
/// of the graph (wrong parity in L1) are stored closed.
struct SiteField {
  OrientedGraph graph;
  Window window;
  std::vector<std::uint8_t> open;

  bool is_open(const Point& x) const noexcept {
    return window.contains(graph.d, x) && open[window.index(graph.d, x)] != 0;
  }
};

/// Each site open with probability 1 - eps independently.
SiteField sample_field(const OrientedGraph& g, double eps, const Window& window, std::uint64_t seed);

/// Sites reachable by a directed path of open sites from an open level-0
/// site, staying inside the window. Indexed like SiteField::open.
std::vector<std::uint8_t> wet_set(const SiteField& field);

/// Fraction of graph sites at `level` that are wet.
double wet_density(const SiteField& field, const std::vector<std::uint8_t>& wet, int level);

/// Self-avoiding walks on Z^d from the origin with 0..n steps (exact, by
/// enumeration). Throws ConfigError beyond the enumeration budget.
std::vector<BigInt> self_avoiding_walks(int d, int n);

/// Directed self-avoiding paths of n steps from the origin in L2. A path
/// only moves up, so it is a sequence of self-avoiding walks on successive
/// levels separated by vertical steps. Budget: n <= 14 for d <= 2, n <= 10
/// for d = 3.
BigInt count_self_avoiding_paths(int d, int n);

struct PathTail {
  double log_bound = 0.0;  // natural log, may be -inf
  double bound = 0.0;      // exp(log_bound) capped at 1
};

/// Union bound (2d+1)^n eps^{n/(2k+1)^{d+1}} for a closed path of n steps
/// from the origin in a k-dependent field on L2. `log_eps` = ln eps, so
/// constants far below double range can be passed.
PathTail closed_path_tail(int d, double log_eps, int n, int k);

/// Monte Carlo probability that an independent field with closed
/// probability eps has a self-avoiding closed path of n steps in L2
/// starting at the origin.
double closed_path_mc(int d, double eps, int n, std::size_t samples, std::uint64_t seed);

struct ContourConstants {
  Rational eps1;  // 6^{-676}
  Rational eps2;  // (4d+2)^{-5^{d+1}}
  double log_eps1 = 0.0;
  double log_eps2 = 0.0;
};

ContourConstants contour_constant(int d);
std::string to_text(const Rational& r);
/// Parses "a/b" or "a"; throws ConfigError on malformed input.
Rational rational_from_text(const std::string& s);

struct SterileArrowProbability {
  double Lambda1 = 0.0;            // lambda (6L+1)^d L^2
  double probability = 1.0;        // exp(-Lambda1 (1 - p))
  double p_plus = 1.0;             // 1 + ln(1 - eps1/2)/Lambda1 as a double
  double log_one_minus_p_plus = 0.0;  // ln(1 - p_plus), accurate where p_plus rounds to 1
};

SterileArrowProbability sterile_arrow_probability(double lambda, double p, int L, int d);

struct SterileArrowSample {
  std::size_t blocks = 0;
  std::size_t zero_blocks = 0;
  double mean_count = 0.0;
};

/// Reads the - arrows of a graphical representation on the block
/// [-3L, 3L]^d x [0, L^2] for `blocks` independent seeds.
SterileArrowSample sample_sterile_arrows(double lambda, double p, int L, int d, std::size_t blocks,
                                         std::uint64_t seed);

enum class ConeSet { nabla_z1, nabla_z, nabla_z2 };

/// Membership in the cone sets based at z with scale L:
///   nabla_{z,1} = {(m, n) in L1 : m in 2z + [-n, n]^d},
///   nabla_z = union over nabla_{z,1} of (mL, nL^2) + [-3L, 3L]^d x [0, L^2],
///   nabla_{z,2} = {(m, n) in L2 : (mL, nL) in nabla_z}.
struct Cone {
  std::array<int, kMaxDim> z{};
  int d = 1;
  int L = 1;

  bool in_nabla_z1(const Point& x) const noexcept;
  /// Space-time point (x, t) of the particle system.
  bool in_nabla_z(const std::array<int, kMaxDim>& x, double t) const noexcept;
  bool in_nabla_z2(const Point& x) const noexcept;
};

}  // namespace scp::percolation
