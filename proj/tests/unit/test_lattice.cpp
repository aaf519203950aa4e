#include <doctest.h>

#include <algorithm>
#include <set>

#include "scp/config_text.hpp"
#include "scp/errors.hpp"
#include "scp/lattice.hpp"
#include "scp/rng.hpp"

using namespace scp;

namespace {

Torus random_config(const std::vector<int>& sides, std::uint64_t seed) {
  auto g = std::make_shared<const Geometry>(sides);
  return product_measure(g, {0.2, 0.2, 0.2, 0.2}, seed);
}

}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("five states with fertile and occupied predicates") {
  const std::array<SiteState, 5> all{SiteState::empty, SiteState::fertile1, SiteState::sterile1,
                                     SiteState::fertile2, SiteState::sterile2};
  int fertile = 0, occupied = 0;
  for (auto s : all) {
    fertile += is_fertile(s);
    occupied += is_occupied(s);
    CHECK(parse_state_token(state_token(s)) == s);
  }
  CHECK(fertile == 2);
  CHECK(occupied == 4);
  CHECK(is_fertile(SiteState::fertile1));
  CHECK(is_fertile(SiteState::fertile2));
  CHECK_FALSE(is_fertile(SiteState::sterile1));
  CHECK(type_of(SiteState::sterile2) == 2);
  CHECK_THROWS_AS(parse_state_token("+3"), ConfigError);
}

TEST_CASE("ring neighbors wrap around") {
  Geometry g({5});
  auto n0 = g.neighbors(0);
  CHECK(std::vector<SiteIndex>(n0.begin(), n0.end()) == std::vector<SiteIndex>{4, 1});
  for (SiteIndex x = 0; x < 5; ++x) CHECK(g.neighbors(x).size() == 2);
}

TEST_CASE("square torus neighbors of the corner") {
  Geometry g({4, 4});
  std::vector<std::vector<int>> got;
  for (SiteIndex y : g.neighbors(g.index(std::vector<int>{0, 0}))) got.push_back(g.coords(y));
  CHECK(got == std::vector<std::vector<int>>{{3, 0}, {1, 0}, {0, 3}, {0, 1}});
}

TEST_CASE("sides below 3 are rejected") {
  CHECK_THROWS_AS(Geometry({2}), ConfigError);
  CHECK_THROWS_AS(Geometry({5, 2}), ConfigError);
  CHECK_THROWS_AS(Geometry(std::vector<int>{}), ConfigError);
}

TEST_CASE("neighbor relation is irreflexive and symmetric") {
  for (const auto& sides : std::vector<std::vector<int>>{{3}, {7}, {3, 4}, {5, 3}, {3, 3, 4}}) {
    Geometry g(sides);
    for (SiteIndex x = 0; x < g.size(); ++x) {
      auto nx = g.neighbors(x);
      CHECK(std::set<SiteIndex>(nx.begin(), nx.end()).size() == nx.size());
      CHECK(std::find(nx.begin(), nx.end(), x) == nx.end());
      for (SiteIndex y : nx) {
        auto ny = g.neighbors(y);
        CHECK(std::find(ny.begin(), ny.end(), x) != ny.end());
      }
    }
  }
}

TEST_CASE("index and coordinates are inverse bijections") {
  Geometry g({3, 5, 4});
  std::set<SiteIndex> seen;
  for (SiteIndex x = 0; x < g.size(); ++x) {
    const auto c = g.coords(x);
    CHECK(g.index(c) == x);
    seen.insert(g.index(c));
  }
  CHECK(seen.size() == g.size());
  // row-major: last axis fastest
  CHECK(g.index(std::vector<int>{0, 0, 1}) == 1);
  CHECK(g.index(std::vector<int>{0, 1, 0}) == 4);
  CHECK(g.index(std::vector<int>{-1, 0, 0}) == g.index(std::vector<int>{2, 0, 0}));
}

TEST_CASE("fertile fraction examples") {
  Torus t({5});
  t.set(1, SiteState::fertile1);
  t.set(4, SiteState::fertile1);
  CHECK(fertile_fraction(t, 0, 1) == 1.0);
  CHECK(fertile_fraction(t, 2, 1) == 0.5);
  Torus e({5});
  CHECK(fertile_fraction(e, 0, 1) == 0.0);
  Torus m({5});
  m.set(1, SiteState::fertile2);
  m.set(3, SiteState::sterile2);
  CHECK(fertile_fraction(m, 2, 2) == 0.5);
}

TEST_CASE("neighborhood fractions partition") {
  const Torus t = random_config({6, 7}, 3);
  for (SiteIndex x = 0; x < t.size(); ++x) {
    double sterile = 0, empty = 0;
    for (SiteIndex y : t.neighbors(x)) {
      sterile += t.at(y) == SiteState::sterile1 || t.at(y) == SiteState::sterile2;
      empty += t.at(y) == SiteState::empty;
    }
    const double deg = t.geometry().degree();
    CHECK(fertile_fraction(t, x, 1) + fertile_fraction(t, x, 2) + sterile / deg + empty / deg ==
          doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("occupancy counts") {
  Torus t({5});
  CHECK(occupancy(t).counts == std::array<std::size_t, 5>{5, 0, 0, 0, 0});
  t.set(2, SiteState::fertile1);
  CHECK(occupancy(t).counts == std::array<std::size_t, 5>{4, 1, 0, 0, 0});
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Torus r = random_config({4, 9}, seed);
    CHECK(occupancy(r).total() == 36);
  }
}

TEST_CASE("occupancy is translation invariant") {
  const Torus t = random_config({5, 6}, 11);
  for (const auto& off : std::vector<std::vector<int>>{{1, 0}, {0, 5}, {3, -2}, {-7, 13}}) {
    const Torus s = translate(t, off);
    CHECK(occupancy(s) == occupancy(t));
    CHECK(s.at(s.geometry().index(std::vector<int>{off[0], off[1]})) == t.at(0));
  }
}

TEST_CASE("minimum-image distances") {
  Geometry g({10, 10});
  const SiteIndex a = g.index(std::vector<int>{1, 1});
  const SiteIndex b = g.index(std::vector<int>{9, 4});
  CHECK(g.displacement(a, b, 0) == -2);
  CHECK(g.displacement(a, b, 1) == 3);
  CHECK(g.sup_distance(a, b) == 3);
  CHECK(g.coords(g.center()) == std::vector<int>{5, 5});
}

TEST_CASE("configuration literals") {
  auto g = std::make_shared<const Geometry>(std::vector<int>{5});
  CHECK(occupancy(parse_config("all-empty", g)).counts[0] == 5);
  const Torus c = parse_config("single-fertile-1@center", g);
  CHECK(c.at(2) == SiteState::fertile1);
  CHECK(occupancy(c).occupied() == 1);
  const Torus r = parse_config("0*2, +1, -2*2", g);
  CHECK(r.at(2) == SiteState::fertile1);
  CHECK(r.at(4) == SiteState::sterile2);
  CHECK(parse_config(format_config(r), g) == r);
  CHECK(unpack_config(pack_config(r), g) == r);
  CHECK_THROWS_AS(parse_config("0*4", g), ConfigError);
  CHECK_THROWS_AS(parse_config("product(0.6,0.6,0,0)", g), ConfigError);
  CHECK_THROWS_AS(parse_config("bogus", g), ConfigError);
}

TEST_CASE("product measure is per-site deterministic") {
  auto g = std::make_shared<const Geometry>(std::vector<int>{400});
  const Torus a = parse_config("product(0.3,0,0.3,0)", g, 9);
  const Torus b = parse_config("product(0.3,0,0.3,0)", g, 9);
  CHECK(a == b);
  const auto occ = occupancy(a);
  CHECK(occ.counts[1] > 80);
  CHECK(occ.counts[3] > 80);
  CHECK(occ.counts[2] == 0);
}

TEST_CASE("counter rng substreams") {
  CounterRng a(7, stream_key(StreamDomain::clock, 3, 4));
  CounterRng b(7, stream_key(StreamDomain::clock, 3, 4));
  CounterRng c(7, stream_key(StreamDomain::clock, 4, 3));
  CHECK(a() == b());
  CHECK(a() != c());
  double sum = 0;
  CounterRng u(1, 2);
  for (int i = 0; i < 100000; ++i) {
    const double x = u.uniform();
    CHECK_UNARY(x > 0.0);
    sum += x;
  }
  // 3 sigma of a uniform mean over 1e5 draws
  CHECK(std::abs(sum / 1e5 - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / 1e5));
}

}
