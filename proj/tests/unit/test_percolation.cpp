#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "oracles/oracles.hpp"
#include "scp/errors.hpp"
#include "scp/percolation.hpp"

using namespace scp;
using namespace scp::percolation;

namespace {

Point pt(int m, int n) {
  Point p;
  p.m[0] = m;
  p.n = n;
  return p;
}

}  // namespace

TEST_SUITE("percolation") {

TEST_CASE("successors in L1 and L2") {
  const auto l1 = OrientedGraph::make(GraphKind::L1, 1);
  CHECK(graph_arrows(l1, pt(0, 0)) == std::vector<Point>{pt(-1, 1), pt(1, 1)});
  CHECK_THROWS_AS(graph_arrows(l1, pt(1, 0)), ConfigError);
  const auto l2 = OrientedGraph::make(GraphKind::L2, 1);
  const auto s = graph_arrows(l2, pt(0, 0));
  CHECK(s.size() == 3);
  CHECK(std::count(s.begin(), s.end(), pt(-1, 0)) == 1);
  CHECK(std::count(s.begin(), s.end(), pt(1, 0)) == 1);
  CHECK(std::count(s.begin(), s.end(), pt(0, 1)) == 1);
  for (int d = 1; d <= 3; ++d) {
    CHECK(graph_arrows(OrientedGraph::make(GraphKind::L2, d), Point{}).size() == static_cast<std::size_t>(2 * d + 1));
    CHECK(graph_arrows(OrientedGraph::make(GraphKind::L1, d), Point{}).size() == static_cast<std::size_t>(2 * d));
  }
  CHECK_THROWS_AS(OrientedGraph::make(GraphKind::L1, 4), ConfigError);
  CHECK(parse_graph_kind("L2") == GraphKind::L2);
  CHECK_THROWS_AS(parse_graph_kind("L3"), ConfigError);
}

TEST_CASE("field extremes and open fraction") {
  const Window w{15, 15};
  for (auto kind : {GraphKind::L1, GraphKind::L2}) {
    const auto g = OrientedGraph::make(kind, 1);
    const auto open = sample_field(g, 0.0, w, 1);
    const auto closed = sample_field(g, 1.0, w, 1);
    for (std::size_t i = 0; i < w.size(1); ++i) {
      const Point x = w.point(1, i);
      CHECK(open.is_open(x) == g.contains(x));
      CHECK_FALSE(closed.is_open(x));
    }
  }
  const auto g = OrientedGraph::make(GraphKind::L2, 2);
  const Window big{30, 30};
  const double eps = 0.3;
  const auto f = sample_field(g, eps, big, 5);
  double n = 0, k = 0;
  for (auto o : f.open) {
    ++n;
    k += o;
  }
  CHECK(std::abs(k / n - (1 - eps)) < 3 * std::sqrt(eps * (1 - eps) / n));
}

TEST_CASE("wet set examples") {
  const Window w{6, 8};
  const auto l2 = OrientedGraph::make(GraphKind::L2, 1);
  const auto all = sample_field(l2, 0.0, w, 1);
  const auto wet = wet_set(all);
  for (std::size_t i = 0; i < wet.size(); ++i) CHECK(wet[i] == 1);

  SiteField bottom = all;
  for (int m = -6; m <= 6; ++m) bottom.open[w.index(1, pt(m, 0))] = 0;
  for (auto v : wet_set(bottom)) CHECK(v == 0);

  SiteField column = sample_field(l2, 1.0, w, 1);
  for (int n = 0; n <= 8; ++n) column.open[w.index(1, pt(2, n))] = 1;
  const auto cw = wet_set(column);
  for (int n = 0; n <= 8; ++n) CHECK(cw[w.index(1, pt(2, n))] == 1);
  CHECK(wet_density(column, cw, 8) == doctest::Approx(1.0 / 13.0));

  const auto l1 = OrientedGraph::make(GraphKind::L1, 1);
  const auto f1 = sample_field(l1, 0.0, w, 1);
  CHECK(wet_density(f1, wet_set(f1), 8) == 1.0);
}

TEST_CASE("opening sites never shrinks the wet set") {
  const Window w{10, 10};
  for (auto kind : {GraphKind::L1, GraphKind::L2}) {
    const auto g = OrientedGraph::make(kind, 1);
    for (std::uint64_t s = 1; s <= 20; ++s) {
      SiteField f = sample_field(g, 0.45, w, s);
      const auto before = wet_set(f);
      const auto extra = sample_field(g, 0.8, w, s + 1000);
      for (std::size_t i = 0; i < f.open.size(); ++i) f.open[i] = f.open[i] | extra.open[i];
      const auto after = wet_set(f);
      for (std::size_t i = 0; i < before.size(); ++i) CHECK(before[i] <= after[i]);
    }
  }
}

TEST_CASE("self-avoiding path counts match the golden table") {
  std::ifstream in(std::string(SCP_FIXTURE_DIR) + "/l2_path_counts.txt");
  REQUIRE(in.good());
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    int d = 0, n = 0;
    std::string count;
    ss >> d >> n >> count;
    CHECK(count_self_avoiding_paths(d, n).str() == count);
    const BigInt bound = boost::multiprecision::pow(BigInt(2 * d + 1), static_cast<unsigned>(n));
    if (n <= 1) {
      CHECK(count_self_avoiding_paths(d, n) == bound);
    } else {
      CHECK(count_self_avoiding_paths(d, n) < bound);
    }
    ++rows;
  }
  CHECK(rows == 30);
  CHECK(count_self_avoiding_paths(1, 1) == 3);
  CHECK(count_self_avoiding_paths(1, 2) == oracle::l2_paths(1, 2));
  CHECK_THROWS_AS(count_self_avoiding_paths(2, 15), ConfigError);
}

TEST_CASE("closed path union bound") {
  const auto c = contour_constant(1);
  for (int n = 1; n <= 30; ++n) {
    const auto t = closed_path_tail(1, c.log_eps2, n, 2);
    CHECK(t.bound == doctest::Approx(std::pow(0.5, n)).epsilon(1e-12));
  }
  CHECK(closed_path_tail(1, -INFINITY, 5, 2).bound == 0.0);
  const double mc = closed_path_mc(1, 0.01, 10, 100000, 3);
  CHECK(mc <= closed_path_tail(1, std::log(0.01), 10, 0).bound);
  for (double eps : {0.2, 0.3}) {
    for (int n : {3, 5}) {
      const double est = closed_path_mc(1, eps, n, 20000, 11);
      const double bound = closed_path_tail(1, std::log(eps), n, 0).bound;
      // one-sided, 1%: est must not exceed the bound by more than 2.33 sigma
      CHECK(est <= bound + 2.33 * std::sqrt(bound * (1 - std::min(bound, 1.0)) / 20000) + 1e-12);
    }
  }
}

TEST_CASE("contour constants are exact") {
  const auto c1 = contour_constant(1);
  CHECK(c1.eps1 == Rational(1) / boost::multiprecision::pow(BigInt(6), 676));
  CHECK(c1.eps2 == Rational(1) / boost::multiprecision::pow(BigInt(6), 25));
  CHECK(c1.log_eps2 == doctest::Approx(-25 * std::log(6.0)));
  const auto c2 = contour_constant(2);
  CHECK(c2.eps2 == Rational(1) / boost::multiprecision::pow(BigInt(10), 125));
  for (const auto& r : {c1.eps1, c1.eps2, c2.eps2}) CHECK(rational_from_text(to_text(r)) == r);
  CHECK_THROWS_AS(rational_from_text("1/x"), ConfigError);
}

TEST_CASE("sterile arrow probability") {
  CHECK(sterile_arrow_probability(2, 1.0, 5, 1).probability == 1.0);
  const auto s = sterile_arrow_probability(2, 0.999, 5, 1);
  CHECK(s.Lambda1 == doctest::Approx(1550.0));
  CHECK(s.probability == doctest::Approx(std::exp(-1.55)).epsilon(1e-12));
  CHECK(s.p_plus <= 1.0);
  // 1 - p+ = -ln(1 - eps1/2) / Lambda1, about eps1 / (2 Lambda1)
  CHECK(s.log_one_minus_p_plus == doctest::Approx(contour_constant(1).log_eps1 - std::log(2.0) - std::log(1550.0)).epsilon(1e-12));
  const auto mc = sample_sterile_arrows(2, 0.999, 5, 1, 3000, 4);
  const double pr = std::exp(-1.55);
  CHECK(std::abs(mc.zero_blocks / 3000.0 - pr) < 3 * std::sqrt(pr * (1 - pr) / 3000));
  CHECK(std::abs(mc.mean_count - 1.55) < 3 * std::sqrt(1.55 / 3000));
}

TEST_CASE("cone membership") {
  Cone c;
  c.d = 1;
  c.L = 3;
  c.z[0] = 2;
  Point apex;
  apex.m[0] = 4;
  CHECK(c.in_nabla_z1(apex));
  Cone c0;
  c0.d = 1;
  c0.L = 3;
  CHECK_FALSE(c0.in_nabla_z1(pt(3, 2)));
  CHECK(c0.in_nabla_z1(pt(2, 2)));
  // nabla_{z,2} is the rescaled trace of nabla_z
  for (int m = -12; m <= 12; ++m) {
    for (int n = 0; n <= 12; ++n) {
      const std::array<int, kMaxDim> x{m * c0.L, 0, 0};
      CHECK(c0.in_nabla_z2(pt(m, n)) == c0.in_nabla_z(x, static_cast<double>(n) * c0.L));
    }
  }
  // nabla_z contains the blocks over nabla_{z,1}
  for (int m = -6; m <= 6; ++m) {
    for (int n = 0; n <= 6; ++n) {
      if (!c0.in_nabla_z1(pt(m, n))) continue;
      for (int dx = -3 * c0.L; dx <= 3 * c0.L; ++dx) {
        const std::array<int, kMaxDim> x{m * c0.L + dx, 0, 0};
        CHECK(c0.in_nabla_z(x, n * c0.L * c0.L + 0.5));
      }
    }
  }
  const std::array<int, kMaxDim> far{100, 0, 0};
  CHECK_FALSE(c0.in_nabla_z(far, 1.0));
}

}
