#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles/oracles.hpp"
#include "scp/errors.hpp"
#include "scp/meanfield.hpp"

using namespace scp;
using namespace scp::meanfield;

namespace {

double sup_norm(const MFState& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::array<std::array<double, 4>, 4> to_array(const Eigen::Matrix4d& j) {
  std::array<std::array<double, 4>, 4> a{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = j(r, c);
  return a;
}

MFState random_simplex_point(std::mt19937_64& gen) {
  std::exponential_distribution<double> e(1.0);
  std::array<double, 5> w{};
  double s = 0;
  for (auto& x : w) s += (x = e(gen));
  return {w[0] / s, w[1] / s, w[2] / s, w[3] / s};
}

}  // namespace

TEST_SUITE("meanfield") {

TEST_CASE("single-type vector field at fixed points") {
  CHECK(rhs_single({0, 0}, 4, 0.5) == SingleState{0, 0});
  const auto f = rhs_single({0.25, 0.25}, 4, 0.5);
  CHECK(std::abs(f[0]) < 1e-15);
  CHECK(std::abs(f[1]) < 1e-15);
  for (double lp : {1.5, 2.0, 5.0}) {
    const double p = 0.3;
    const auto q = interior_point(lp / p, p);
    const auto g = rhs_single(q, lp / p, p);
    CHECK(std::max(std::abs(g[0]), std::abs(g[1])) < 1e-12);
  }
  const auto o = oracle::single_rhs(0.3, 0.1, 4, 0.5);
  const auto v = rhs_single({0.3, 0.1}, 4, 0.5);
  CHECK(v[0] == doctest::Approx(o[0]).epsilon(1e-14));
  CHECK(v[1] == doctest::Approx(o[1]).epsilon(1e-14));
  CHECK_THROWS_AS(rhs_single({0.7, 0.4}, 4, 0.5), ConfigError);
}

TEST_CASE("two-type vector field examples") {
  const ModelParams m{4, 3, 0.5, 0.6};
  const auto f = rhs_two({0, 0.2, 0, 0.1}, m);
  for (double x : f) CHECK(x <= 0.0);
  CHECK(f[1] == doctest::Approx(-0.2));
  CHECK(f[3] == doctest::Approx(-0.1));
  CHECK(sup_norm(rhs_two(q1_point(m), m)) < 1e-12);
  const ModelParams line{4, 10.0 / 3.0, 0.5, 0.6};
  for (double th : {0.1, 0.5, 0.9}) CHECK(sup_norm(rhs_two(p_theta_point(line, th), line)) < 1e-12);
}

TEST_CASE("type-2-free reduction and type symmetry") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const ModelParams m{5 * U(gen), 5 * U(gen), U(gen), U(gen)};
    const double a = U(gen) * 0.5, b = U(gen) * 0.5;
    const auto two = rhs_two({a, b, 0, 0}, m);
    const auto one = rhs_single({a, b}, m.lambda1, m.p1);
    CHECK(two[0] == doctest::Approx(one[0]).epsilon(1e-14));
    CHECK(two[1] == doctest::Approx(one[1]).epsilon(1e-14));
    CHECK(two[2] == 0.0);
    CHECK(two[3] == 0.0);
    const MFState u = random_simplex_point(gen);
    const ModelParams sw{m.lambda2, m.lambda1, m.p2, m.p1};
    const auto f = rhs_two(u, m);
    const auto g = rhs_two({u[2], u[3], u[0], u[1]}, sw);
    CHECK(g[0] == doctest::Approx(f[2]).epsilon(1e-14));
    CHECK(g[1] == doctest::Approx(f[3]).epsilon(1e-14));
    CHECK(g[2] == doctest::Approx(f[0]).epsilon(1e-14));
    CHECK(g[3] == doctest::Approx(f[1]).epsilon(1e-14));
  }
}

TEST_CASE("integration: extinction, convergence and the u+ = 0 axis") {
  for (const SingleState u0 : {SingleState{0.5, 0.2}, SingleState{0.05, 0.9}, SingleState{0.3, 0.3}}) {
    const auto sol = integrate_single(1.8, 0.5, u0, 200.0);
    const auto& end = sol.state.back();
    CHECK(end[0] + end[1] < 1e-6);
  }
  const auto sol = integrate_single(4, 0.5, {0.1, 0.1}, 100.0);
  const auto t = convergence_time(sol, SingleState{0.25, 0.25});
  REQUIRE(t.has_value());
  CHECK(*t <= 100.0);
  const auto axis = integrate_single(4, 0.5, {0.0, 0.6}, 5.0);
  for (std::size_t i = 0; i < axis.time.size(); ++i) {
    CHECK(axis.state[i][0] == 0.0);
    CHECK(axis.state[i][1] == doctest::Approx(0.6 * std::exp(-axis.time[i])).epsilon(1e-10));
  }
}

TEST_CASE("integrator keeps trajectories in the simplex") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const ModelParams m{10 * U(gen), 10 * U(gen), U(gen), U(gen)};
    const auto sol = integrate_two(m, random_simplex_point(gen), 20.0);
    for (const auto& u : sol.state) {
      double s = 0;
      for (double x : u) {
        CHECK(x >= 0.0);
        s += x;
      }
      CHECK(s <= 1.0);
    }
  }
}

TEST_CASE("fixed point lists") {
  const auto boundary = fixed_points(ModelParams{2, 4, 0.5, 0.25});
  REQUIRE(boundary.size() == 1);
  CHECK(boundary[0].kind == FixedPointKind::trivial);

  const auto one = fixed_points(ModelParams{4, 0, 0.5, 1});
  REQUIRE(one.size() == 2);
  CHECK(one[1].kind == FixedPointKind::Q1);
  CHECK(one[1].location == MFState{0.25, 0.25, 0, 0});
  CHECK(one[1].stability == Stability::stable);

  const auto coex = fixed_points(ModelParams{4, 2, 0.5, 1});
  bool has_theta = false;
  for (const auto& r : coex) {
    if (r.kind == FixedPointKind::P_theta) {
      has_theta = true;
      REQUIRE(r.theta);
      CHECK(*r.theta > 0.0);
      CHECK(*r.theta < 1.0);
    }
    CHECK(sup_norm(rhs_two(r.location, ModelParams{4, 2, 0.5, 1})) < 1e-12);
  }
  CHECK(has_theta);
}

TEST_CASE("no unexpected interior fixed points") {
  for (const ModelParams& m : {ModelParams{4, 3, 0.5, 0.5}, ModelParams{3, 6, 0.9, 0.4}, ModelParams{4, 2, 0.5, 1}}) {
    const auto scan = scan_interior_fixed_points(m, 60, 200);
    CHECK(scan.unexpected.empty());
  }
}

TEST_CASE("single-type trace and determinant") {
  const auto at0 = trace_det({0, 0}, 4, 0.5);
  CHECK(at0.trace == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(at0.det == doctest::Approx(-1.0));
  const auto atq = trace_det({0.25, 0.25}, 4, 0.5);
  CHECK(atq.trace == doctest::Approx(-2.0));
  CHECK(atq.det == doctest::Approx(1.0));
  for (double lp : {0.5, 0.9, 1.1, 2.0, 7.0}) {
    const double p = 0.4;
    const auto q = lp > 1 ? interior_point(lp / p, p) : SingleState{0, 0};
    bool stable = true;
    for (auto ev : eigenvalues(jacobian_single(q, lp / p, p))) stable = stable && ev.real() < 0;
    if (lp > 1) CHECK(stable);
  }
}

TEST_CASE("spectrum at Q1") {
  auto sorted = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto s = sorted(spectrum_q1(ModelParams{4, 2, 0.5, 0.5}));
  const std::vector<double> want{-1, -1, -1, -0.5};
  for (std::size_t i = 0; i < 4; ++i) CHECK(s[i] == doctest::Approx(want[i]));
  const auto u = spectrum_q1(ModelParams{4, 6, 0.5, 0.5});
  CHECK(std::find_if(u.begin(), u.end(), [](double x) { return std::abs(x - 0.5) < 1e-12; }) != u.end());
  CHECK(classify_spectrum(u) == Stability::unstable);
  const auto z = spectrum_q1(ModelParams{4, 4, 0.5, 0.5});
  CHECK(std::find_if(z.begin(), z.end(), [](double x) { return std::abs(x) < 1e-12; }) != z.end());
}

TEST_CASE("characteristic polynomial on the coexistence line") {
  const ModelParams m{4, 2, 0.5, 1};
  const auto c = charpoly_p_theta(m, 0.3);
  // lambda1 p1 = 2: alpha = -1, X (X+1)^3
  const std::array<double, 5> want{1, 3, 3, 1, 0};
  for (std::size_t i = 0; i < 5; ++i) CHECK(c[i] == doctest::Approx(want[i]).epsilon(1e-12));
  for (double th : {0.1, 0.5, 0.77}) {
    const auto pt = p_theta_point(m, th);
    const Eigen::Matrix4d j = jacobian_two(pt, m);
    const auto num = characteristic_polynomial(j);
    const auto ora = oracle::charpoly_by_interpolation(to_array(j));
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(std::abs(num[i] - want[i]) < 1e-8);
      CHECK(std::abs(ora[i] - want[i]) < 1e-8);
    }
    const MFState d{q1_point(m)[0] - q2_point(m)[0], q1_point(m)[1] - q2_point(m)[1],
                    q1_point(m)[2] - q2_point(m)[2], q1_point(m)[3] - q2_point(m)[3]};
    const Eigen::Vector4d jd = j * Eigen::Vector4d(d[0], d[1], d[2], d[3]);
    CHECK(jd.cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK_THROWS_AS(charpoly_p_theta(ModelParams{4, 3, 0.5, 1}, 0.5), ConfigError);
}

TEST_CASE("analytic and finite-difference Jacobians agree") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const ModelParams m{6 * U(gen), 6 * U(gen), U(gen), U(gen)};
    MFState u = random_simplex_point(gen);
    for (double& x : u) x = 0.02 + 0.9 * x;  // keep 1e-6 away from the boundary
    double s = 0;
    for (double x : u) s += x;
    for (double& x : u) x *= 0.98 / std::max(s, 0.98);
    const Eigen::Matrix4d a = jacobian_two(u, m);
    const Eigen::Matrix4d f = jacobian_two_fd(u, m, 1e-6);
    CHECK((a - f).cwiseAbs().maxCoeff() < 1e-5);
  }
}

TEST_CASE("Dulac divergence") {
  for (int i = 1; i < 100; i += 7) {
    for (int j = 1; i + j < 100; j += 7) {
      const SingleState u{i / 100.0, j / 100.0};
      const double v = dulac_divergence(u, 4, 0.5);
      CHECK(v < 0.0);
      CHECK(v == doctest::Approx(oracle::dulac_fd(u[0], u[1], 4, 0.5)).epsilon(1e-5));
    }
  }
  CHECK(dulac_divergence({0.3, 1e-9}, 4, 0.5) < -1e15);
  CHECK_THROWS_AS(dulac_divergence({0.3, 0.0}, 4, 0.5), ConfigError);
}

TEST_CASE("outcome classification") {
  CHECK(classify_outcome(ModelParams{1, 1.8, 0.5, 0.5}) == Outcome::extinction);
  CHECK(classify_outcome(ModelParams{3, 2, 1, 1}) == Outcome::type1_wins);
  CHECK(classify_outcome(ModelParams{2, 3, 1, 1}) == Outcome::type2_wins);
  CHECK(classify_outcome(ModelParams{4, 2, 0.5, 1}) == Outcome::coexistence);
}

TEST_CASE("the plane q u+ = p u- is invariant") {
  const ModelParams m{4, 3, 0.5, 0.6};
  CHECK(gamma2_residual(q1_point(m), m) == std::array<double, 2>{0, 0});
  const auto r = gamma2_residual({0.3, 0.1, 0, 0}, m);
  CHECK(r[0] == doctest::Approx(0.1));
  // start on the plane: u-i = (qi / pi) u+i
  const MFState u0{0.1, 0.1, 0.2, 0.2 * 0.4 / 0.6};
  const auto sol = integrate_two(m, u0, 100.0, {1e-3, 0.0});
  double worst = 0;
  for (const auto& u : sol.state) {
    const auto g = gamma2_residual(u, m);
    worst = std::max({worst, std::abs(g[0]), std::abs(g[1])});
  }
  CHECK(worst < 1e-8);
}

}
