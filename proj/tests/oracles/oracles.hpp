#pragma once

// Independent reference computations. Nothing here calls into scp::, so a
// bug in the library cannot also hide in its oracle.

#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace oracle {

// Directed self-avoiding paths of n steps from the origin on Z^d x N where
// each step moves one unit along a spatial axis at the same level or one
// level up. Plain DFS over visited space-time points.
inline std::uint64_t l2_paths(int d, int n) {
  using P = std::array<int, 4>;  // up to 3 spatial axes + level
  std::set<P> seen;
  std::uint64_t count = 0;
  auto dfs = [&](auto&& self, P at, int left) -> void {
    if (left == 0) {
      ++count;
      return;
    }
    std::vector<P> next;
    for (int a = 0; a < d; ++a) {
      for (int s : {-1, 1}) {
        P q = at;
        q[static_cast<std::size_t>(a)] += s;
        next.push_back(q);
      }
    }
    P up = at;
    up[3] += 1;
    next.push_back(up);
    for (const P& q : next) {
      if (seen.count(q)) continue;
      seen.insert(q);
      self(self, q, left - 1);
      seen.erase(q);
    }
  };
  const P origin{0, 0, 0, 0};
  seen.insert(origin);
  dfs(dfs, origin, n);
  return count;
}

// P(Y = k), k <= kmax, by expanding G_Y(s) = pbar (ps+q)^{2d} / (1 - (1-pbar)(ps+q))
// as a double power series: binomial coefficients times a geometric series.
inline std::vector<double> offspring_pmf(int d, double p, int kmax) {
  const double pbar = 1.0 / (2.0 * d + 1.0);
  const double q = 1.0 - p;
  // P(Y = k) = sum_{j >= 0} pbar (1-pbar)^j P(Bin(2d + j, p) = k)
  std::vector<double> out(static_cast<std::size_t>(kmax) + 1, 0.0);
  for (int j = 0; j < 4000; ++j) {
    const int m = 2 * d + j;
    const double w = pbar * std::pow(1.0 - pbar, j);
    if (w < 1e-18) break;
    for (int k = 0; k <= kmax && k <= m; ++k) {
      const double logc = std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0);
      const double term = (p == 0.0) ? (k == 0 ? 1.0 : 0.0)
                          : (q == 0.0) ? (k == m ? 1.0 : 0.0)
                                       : std::exp(logc + k * std::log(p) + (m - k) * std::log(q));
      out[static_cast<std::size_t>(k)] += w * term;
    }
  }
  return out;
}

// Wilson score interval by the textbook formula.
inline std::pair<double, double> wilson(double successes, double n, double z) {
  const double ph = successes / n;
  const double den = 1.0 + z * z / n;
  const double centre = (ph + z * z / (2.0 * n)) / den;
  const double half = z * std::sqrt(ph * (1.0 - ph) / n + z * z / (4.0 * n * n)) / den;
  return {centre - half, centre + half};
}

// Single-type pair dynamics written out case by case. States: xi in
// {'0','+','-'}, eta in {'0','+'}. Events: 'P' (+ arrow x->y), 'M' (- arrow
// x->y), 'D' (death at y). Returns the new (xi(y), eta(y)).
inline std::pair<char, char> pair_step(char xi_x, char eta_x, char xi_y, char eta_y, char ev) {
  if (ev == 'D') return {'0', '0'};
  char nx = xi_y;
  char ne = eta_y;
  if (xi_x == '+' && xi_y == '0') nx = (ev == 'P') ? '+' : '-';
  if (ev == 'P' && eta_x == '+' && eta_y == '0') ne = '+';
  return {nx, ne};
}

inline bool pair_admissible(char xi, char eta) {
  const std::string s{xi, eta};
  return s == "-0" || s == "-+" || s == "00" || s == "0+" || s == "++";
}

// Closed-form mean-field quantities.
inline std::array<double, 2> single_rhs(double up, double um, double lambda, double p) {
  const double empty = 1.0 - up - um;
  return {lambda * p * up * empty - up, lambda * (1.0 - p) * up * empty - um};
}

// Dulac divergence with weight 1/(u+ u-): d/du+ (f/(u+u-)) + d/du- (g/(u+u-)),
// evaluated by central differences of the weighted field.
inline double dulac_fd(double up, double um, double lambda, double p, double h = 1e-6) {
  auto f = [&](double a, double b) { return single_rhs(a, b, lambda, p)[0] / (a * b); };
  auto g = [&](double a, double b) { return single_rhs(a, b, lambda, p)[1] / (a * b); };
  return (f(up + h, um) - f(up - h, um)) / (2 * h) + (g(up, um + h) - g(up, um - h)) / (2 * h);
}

// Determinant of a 4x4 matrix by cofactor expansion.
inline double det3(const std::array<std::array<double, 3>, 3>& a) {
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

inline double det4(const std::array<std::array<double, 4>, 4>& a) {
  double sum = 0.0;
  for (int c = 0; c < 4; ++c) {
    std::array<std::array<double, 3>, 3> minor{};
    for (int r = 1; r < 4; ++r) {
      int cc = 0;
      for (int k = 0; k < 4; ++k) {
        if (k == c) continue;
        minor[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(cc++)] = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)];
      }
    }
    sum += (c % 2 == 0 ? 1.0 : -1.0) * a[0][static_cast<std::size_t>(c)] * det3(minor);
  }
  return sum;
}

// Characteristic polynomial det(X I - A), monic, coefficients from X^4 down,
// recovered by evaluating the determinant at 5 points and solving the
// Vandermonde system (exact for degree 4 up to rounding).
inline std::array<double, 5> charpoly_by_interpolation(const std::array<std::array<double, 4>, 4>& a) {
  const std::array<double, 5> xs{-2.0, -1.0, 0.0, 1.0, 2.0};
  std::array<double, 5> ys{};
  for (std::size_t i = 0; i < 5; ++i) {
    auto m = a;
    for (std::size_t r = 0; r < 4; ++r) {
      for (std::size_t c = 0; c < 4; ++c) m[r][c] = (r == c ? xs[i] : 0.0) - a[r][c];
    }
    ys[i] = det4(m);
  }
  // Lagrange interpolation to monomial coefficients.
  std::array<double, 5> coef{};  // coef[k] multiplies X^k
  for (std::size_t i = 0; i < 5; ++i) {
    std::array<double, 5> basis{1.0, 0, 0, 0, 0};
    double denom = 1.0;
    int deg = 0;
    for (std::size_t j = 0; j < 5; ++j) {
      if (j == i) continue;
      std::array<double, 5> nb{};
      for (int k = 0; k <= deg; ++k) {
        nb[static_cast<std::size_t>(k + 1)] += basis[static_cast<std::size_t>(k)];
        nb[static_cast<std::size_t>(k)] -= xs[j] * basis[static_cast<std::size_t>(k)];
      }
      basis = nb;
      ++deg;
      denom *= xs[i] - xs[j];
    }
    for (std::size_t k = 0; k < 5; ++k) coef[k] += ys[i] * basis[k] / denom;
  }
  return {coef[4], coef[3], coef[2], coef[1], coef[0]};
}

}  // namespace oracle
