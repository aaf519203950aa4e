#include <doctest.h>

#include <cmath>
#include <map>

#include "oracles/oracles.hpp"
#include "scp/branching.hpp"
#include "scp/config_text.hpp"
#include "scp/errors.hpp"
#include "scp/rng.hpp"
#include "scp/simulator.hpp"
#include "scp/stats.hpp"

using namespace scp;
using namespace scp::branching;

TEST_SUITE("branching") {

TEST_CASE("shifted geometric N") {
  const auto s = GWSpec::make(1, 0.2);
  CHECK(s.pbar() == doctest::Approx(1.0 / 3.0));
  CHECK(pgf_N(s, 1.0) == doctest::Approx(1.0));
  const double h = 1e-6;
  CHECK((pgf_N(s, 1 + h) - pgf_N(s, 1 - h)) / (2 * h) == doctest::Approx(2.0).epsilon(1e-6));
  std::vector<double> xs;
  CounterRng rng(3, stream_key(StreamDomain::generic, 1));
  for (int i = 0; i < 100000; ++i) xs.push_back(static_cast<double>(sample_N(s, rng)));
  const double sigma = std::sqrt(stats::variance(xs) / xs.size());
  CHECK(std::abs(stats::mean(xs) - 2.0) < 3 * sigma);
}

TEST_CASE("fertile offspring Y") {
  const auto zero = GWSpec::make(2, 0.0);
  CounterRng rng(1, 2);
  for (int i = 0; i < 1000; ++i) CHECK(sample_Y(zero, rng) == 0);
  CHECK(pgf_Y(zero, 0.3) == doctest::Approx(1.0));
  const auto s = GWSpec::make(1, 0.25);
  CHECK(s.mean_offspring() == doctest::Approx(1.0));
  for (const auto& spec : {GWSpec::make(1, 0.2), GWSpec::make(2, 0.1), GWSpec::make(3, 0.05)}) {
    CHECK(pgf_Y(spec, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    const double h = 1e-5;
    const double fd = (pgf_Y(spec, 1 + h) - pgf_Y(spec, 1 - h)) / (2 * h);
    CHECK(std::abs(fd - 4 * spec.d * spec.p) < 1e-6);
  }
}

TEST_CASE("exact offspring law against the series oracle and sampling") {
  for (int d : {1, 2}) {
    const double p = d == 1 ? 0.2 : 0.1;
    const auto exact = offspring_pmf_exact(d, Rational(d == 1 ? 1 : 1, d == 1 ? 5 : 10), 20);
    const auto series = oracle::offspring_pmf(d, p, 20);
    for (std::size_t k = 0; k <= 20; ++k) {
      CHECK(static_cast<double>(exact[k]) == doctest::Approx(series[k]).epsilon(1e-10));
    }
  }
  const auto spec = GWSpec::make(1, 0.2);
  const auto exact = offspring_pmf_exact(1, Rational(1, 5), 10);
  std::map<std::uint64_t, int> hist;
  CounterRng rng(11, 5);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++hist[sample_Y(spec, rng)];
  for (std::uint64_t k = 0; k <= 10; ++k) {
    const double pk = static_cast<double>(exact[k]);
    CHECK(std::abs(hist[k] / double(n) - pk) <= 3 * std::sqrt(pk * (1 - pk) / n) + 1e-12);
  }
}

TEST_CASE("total progeny generating function") {
  const auto s = GWSpec::make(1, 0.125);
  CHECK(*pgf_X(s, 0.0) == 0.0);
  CHECK(*pgf_X(s, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  const double h = 1e-5;
  const double d1 = (*pgf_X(s, 1 + h) - *pgf_X(s, 1 - h)) / (2 * h);
  CHECK(std::abs(d1 - 2.0) < 1e-4);
  const auto t = GWSpec::make(1, 0.2);
  const auto v = pgf_X(t, 1.005);
  REQUIRE(v.has_value());
  CHECK(std::isfinite(*v));
  for (double x : {0.1, 0.5, 0.9, 1.0, 1.01}) {
    const auto g = pgf_X(t, x);
    REQUIRE(g);
    CHECK(std::abs(*g - x * pgf_Y(t, *g)) < 1e-10);
  }
  CHECK_FALSE(pgf_X(t, 2.0).has_value());
}

TEST_CASE("tail certificate") {
  const auto c = find_s1(GWSpec::make(1, 0.2));
  CHECK(c.s1 > 1.0);
  CHECK(c.C1 >= 1.0);
  CHECK(find_s1(GWSpec::make(1, 0.01)).s1 > c.s1);
  CHECK_THROWS_AS(find_s1(GWSpec::make(1, 0.3)), ConfigError);
}

TEST_CASE("simulated total progeny") {
  const auto none = progeny_stats(GWSpec::make(2, 0.0), 1000, 1);
  for (auto x : none.samples) CHECK(x == 1);
  const auto st = progeny_stats(GWSpec::make(1, 0.125), 100000, 2);
  std::vector<double> xs(st.samples.begin(), st.samples.end());
  CHECK(st.capped == 0);
  CHECK(std::abs(stats::mean(xs) - 2.0) < 3 * std::sqrt(stats::variance(xs) / xs.size()));
  const auto sup = progeny_stats(GWSpec::make(1, 0.3), 200, 3, 100000);
  CHECK(sup.capped > 0);
}

TEST_CASE("empirical progeny tail under the certificate") {
  const auto spec = GWSpec::make(1, 0.2);
  const auto c = find_s1(spec);
  const auto st = progeny_stats(spec, 20000, 4);
  for (std::uint64_t n = 1; n <= 50; ++n) CHECK(st.tail(n) <= c.C1 * std::pow(c.s1, -double(n)));
}

TEST_CASE("lifespan sum tail") {
  const auto r = lifespan_sum_tail(5, 10.0, 100000, 7);
  // (e/2)^-5 = 0.215614...
  CHECK(r.bound == doctest::Approx(std::pow(std::exp(1.0) / 2.0, -5.0)).epsilon(1e-14));
  CHECK(r.bound == doctest::Approx(0.215614).epsilon(1e-5));
  CHECK(r.mc <= r.bound);
  CHECK(lifespan_sum_tail(0, 10.0, 1000, 1).mc == 0.0);
  CHECK_THROWS_AS(lifespan_sum_tail(6, 10.0, 10, 1), ConfigError);
}

TEST_CASE("spatial fertile count is dominated by the total progeny") {
  // Single +1 on a ring, p < 1/4: count every fertile individual ever present.
  const double lambda = 10.0, p = 0.2;
  auto g = std::make_shared<const Geometry>(std::vector<int>{201});
  const Torus init = parse_config("single-fertile-1@center", g);
  std::vector<double> spatial, tree;
  for (std::uint64_t s = 0; s < 3000; ++s) {
    const auto t = run_graphical(ModelParams{lambda, 0, p, 1}, init, 1000.0, s);
    spatial.push_back(1.0 + static_cast<double>(t.births[state_slot(SiteState::fertile1)]));
  }
  const auto st = progeny_stats(GWSpec::make(1, p), 3000, 99);
  for (auto x : st.samples) tree.push_back(static_cast<double>(x));
  for (std::size_t i = 0; i < st.capped; ++i) tree.push_back(1e18);
  // H0: same law. Rejecting "spatial larger" at 1% would contradict domination.
  CHECK(stats::mann_whitney_greater(spatial, tree) > 0.01);
}

}
