#include "scp/meanfield.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "scp/errors.hpp"

namespace scp::meanfield {

template <std::size_t N>
void require_in_simplex(const std::array<double, N>& u, double tol) {
  double sum = 0.0;
  for (double v : u) {
    if (!(v >= -tol)) throw ConfigError("density outside the simplex (negative coordinate)");
    sum += v;
  }
  if (sum > 1.0 + tol) throw ConfigError("density outside the simplex (sum exceeds 1)");
}

template void require_in_simplex<2>(const std::array<double, 2>&, double);
template void require_in_simplex<4>(const std::array<double, 4>&, double);

namespace {

SingleState rhs_single_unchecked(const SingleState& u, double lambda, double p) {
  const double u0 = empty_density(u);
  const double births = lambda * u[0] * u0;
  return {p * births - u[0], (1.0 - p) * births - u[1]};
}

MFState rhs_two_unchecked(const MFState& u, const ModelParams& m) {
  const double u0 = empty_density(u);
  const double b1 = m.lambda1 * u[0] * u0;
  const double b2 = m.lambda2 * u[2] * u0;
  return {m.p1 * b1 - u[0], m.q(1) * b1 - u[1], m.p2 * b2 - u[2], m.q(2) * b2 - u[3]};
}

template <std::size_t N>
void clamp_to_simplex(std::array<double, N>& u) {
  double sum = 0.0;
  for (double& v : u) {
    if (v < -kSimplexTolerance) {
      throw ConfigError("integration left the simplex; reduce the step size");
    }
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (sum > 1.0 + kSimplexTolerance) {
    throw ConfigError("integration left the simplex; reduce the step size");
  }
  if (sum > 1.0) {
    for (double& v : u) v /= sum;
  }
}

template <std::size_t N, class Rhs>
Solution<N> rk4(Rhs&& f, std::array<double, N> u, double t_end, const IntegrateOptions& opt) {
  require_in_simplex(u);
  if (!(opt.step > 0.0)) throw ConfigError("integration step must be positive");
  if (!(t_end >= 0.0)) throw ConfigError("integration end time must be >= 0");
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::round(t_end / opt.step)));
  const double h = t_end / static_cast<double>(steps);
  const std::size_t every =
      opt.record_interval > 0
          ? std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(opt.record_interval / h)))
          : 1;

  Solution<N> sol;
  sol.time.push_back(0.0);
  sol.state.push_back(u);
  auto axpy = [](const std::array<double, N>& x, double a, const std::array<double, N>& y) {
    std::array<double, N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = x[i] + a * y[i];
    return r;
  };
  for (std::size_t k = 1; k <= steps; ++k) {
    const auto k1 = f(u);
    const auto k2 = f(axpy(u, h / 2, k1));
    const auto k3 = f(axpy(u, h / 2, k2));
    const auto k4 = f(axpy(u, h, k3));
    for (std::size_t i = 0; i < N; ++i) {
      u[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    clamp_to_simplex(u);
    if (k % every == 0 || k == steps) {
      sol.time.push_back(static_cast<double>(k) * h);
      sol.state.push_back(u);
    }
  }
  return sol;
}

}  // namespace

SingleState rhs_single(const SingleState& u, double lambda, double p) {
  require_in_simplex(u);
  return rhs_single_unchecked(u, lambda, p);
}

MFState rhs_two(const MFState& u, const ModelParams& params) {
  require_in_simplex(u);
  return rhs_two_unchecked(u, params);
}

Solution<2> integrate_single(double lambda, double p, const SingleState& u0, double t_end,
                             const IntegrateOptions& options) {
  return rk4<2>([&](const SingleState& u) { return rhs_single_unchecked(u, lambda, p); }, u0,
                t_end, options);
}

Solution<4> integrate_two(const ModelParams& params, const MFState& u0, double t_end,
                          const IntegrateOptions& options) {
  return rk4<4>([&](const MFState& u) { return rhs_two_unchecked(u, params); }, u0, t_end,
                options);
}

template <std::size_t N>
std::optional<double> convergence_time(const Solution<N>& sol, const std::array<double, N>& target,
                                       double tol, double sustain) {
  std::size_t first_good = sol.state.size();
  for (std::size_t k = sol.state.size(); k-- > 0;) {
    double dist = 0.0;
    for (std::size_t i = 0; i < N; ++i) dist = std::max(dist, std::abs(sol.state[k][i] - target[i]));
    if (!(dist < tol)) break;
    first_good = k;
  }
  if (first_good == sol.state.size()) return std::nullopt;
  if (sol.time.back() - sol.time[first_good] < sustain) return std::nullopt;
  return sol.time[first_good];
}

template std::optional<double> convergence_time<2>(const Solution<2>&, const SingleState&, double,
                                                   double);
template std::optional<double> convergence_time<4>(const Solution<4>&, const MFState&, double,
                                                   double);

SingleState interior_point(double lambda, double p) {
  const double scale = 1.0 - 1.0 / (lambda * p);
  return {scale * p, scale * (1.0 - p)};
}

MFState q1_point(const ModelParams& m) {
  const auto q = interior_point(m.lambda1, m.p1);
  return {q[0], q[1], 0.0, 0.0};
}

MFState q2_point(const ModelParams& m) {
  const auto q = interior_point(m.lambda2, m.p2);
  return {0.0, 0.0, q[0], q[1]};
}

MFState p_theta_point(const ModelParams& m, double theta) {
  const MFState a = q1_point(m), b = q2_point(m);
  MFState r;
  for (std::size_t i = 0; i < 4; ++i) r[i] = theta * a[i] + (1.0 - theta) * b[i];
  return r;
}

const char* to_string(FixedPointKind k) noexcept {
  switch (k) {
    case FixedPointKind::trivial: return "trivial";
    case FixedPointKind::Q: return "Q";
    case FixedPointKind::Q1: return "Q1";
    case FixedPointKind::Q2: return "Q2";
    case FixedPointKind::P_theta: return "P_theta";
  }
  return "?";
}

const char* to_string(Stability s) noexcept {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::marginal: return "marginal";
  }
  return "?";
}

const char* to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::extinction: return "extinction";
    case Outcome::type1_wins: return "type1-wins";
    case Outcome::type2_wins: return "type2-wins";
    case Outcome::coexistence: return "coexistence";
  }
  return "?";
}

Stability classify_spectrum(const std::vector<double>& ev, double tol) {
  const double top = ev.empty() ? 0.0 : *std::max_element(ev.begin(), ev.end());
  if (top < -tol) return Stability::stable;
  if (top > tol) return Stability::unstable;
  return Stability::marginal;
}

namespace {

std::vector<double> sorted_real_parts(const std::vector<std::complex<double>>& ev) {
  std::vector<double> r;
  r.reserve(ev.size());
  for (const auto& z : ev) r.push_back(z.real());
  std::sort(r.begin(), r.end(), std::greater<>());
  return r;
}

FixedPointReport make_report(const MFState& at, FixedPointKind kind, const ModelParams& m) {
  FixedPointReport r;
  r.location = at;
  r.kind = kind;
  r.eigenvalues = sorted_real_parts(eigenvalues(jacobian_two(at, m)));
  r.stability = classify_spectrum(r.eigenvalues);
  return r;
}

double sup_distance(const MFState& a, const MFState& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < 4; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

/// Distance from u to the set of analytic fixed points.
double distance_to_known(const MFState& u, const ModelParams& m) {
  double best = sup_distance(u, MFState{});
  const double r1 = m.lambda1 * m.p1, r2 = m.lambda2 * m.p2;
  if (r1 > 1) best = std::min(best, sup_distance(u, q1_point(m)));
  if (r2 > 1) best = std::min(best, sup_distance(u, q2_point(m)));
  if (on_coexistence_line(m) && r1 > 1) {
    // Project onto the segment Q2 + theta (Q1 - Q2).
    const MFState a = q1_point(m), b = q2_point(m);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      num += (u[i] - b[i]) * (a[i] - b[i]);
      den += (a[i] - b[i]) * (a[i] - b[i]);
    }
    const double theta = std::clamp(num / den, 0.0, 1.0);
    best = std::min(best, sup_distance(u, p_theta_point(m, theta)));
  }
  return best;
}

}  // namespace

std::vector<FixedPointReport> fixed_points_single(double lambda, double p) {
  std::vector<FixedPointReport> out;
  auto add = [&](const SingleState& at, FixedPointKind kind) {
    FixedPointReport r;
    r.location = {at[0], at[1], 0.0, 0.0};
    r.kind = kind;
    r.eigenvalues = sorted_real_parts(eigenvalues(jacobian_single(at, lambda, p)));
    r.stability = classify_spectrum(r.eigenvalues);
    out.push_back(r);
  };
  add({0.0, 0.0}, FixedPointKind::trivial);
  if (lambda * p > 1.0) add(interior_point(lambda, p), FixedPointKind::Q);
  return out;
}

ScanReport scan_interior_fixed_points(const ModelParams& m, int mesh, std::size_t max_polish) {
  if (mesh < 5) throw ConfigError("scan mesh must be at least 5");
  ScanReport report;
  const double h = 1.0 / mesh;
  // Residual threshold: a fixed point is within h of some grid point, and the
  // field is Lipschitz with constant about 2 + 2 max(lambda).
  const double threshold = (2.0 + 2.0 * std::max(m.lambda1, m.lambda2)) * h;
  std::vector<MFState> candidates;
  for (int a = 1; a < mesh; ++a) {
    for (int b = 1; a + b < mesh; ++b) {
      for (int c = 1; a + b + c < mesh; ++c) {
        for (int d = 1; a + b + c + d < mesh; ++d) {
          ++report.grid_points;
          const MFState u{a * h, b * h, c * h, d * h};
          const MFState f = rhs_two_unchecked(u, m);
          double r = 0.0;
          for (double v : f) r = std::max(r, std::abs(v));
          if (r < threshold) candidates.push_back(u);
        }
      }
    }
  }
  report.candidates = candidates.size();
  const std::size_t stride = std::max<std::size_t>(1, candidates.size() / std::max<std::size_t>(1, max_polish));
  for (std::size_t k = 0; k < candidates.size(); k += stride) {
    ++report.polished;
    MFState u = candidates[k];
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
      const MFState f = rhs_two_unchecked(u, m);
      double r = 0.0;
      for (double v : f) r = std::max(r, std::abs(v));
      if (r < 1e-13) {
        converged = true;
        break;
      }
      const Eigen::Matrix4d j = jacobian_two(u, m);
      const Eigen::Vector4d rhs(f[0], f[1], f[2], f[3]);
      const Eigen::Vector4d step = j.completeOrthogonalDecomposition().solve(rhs);
      for (int i = 0; i < 4; ++i) u[static_cast<std::size_t>(i)] -= step[i];
      if (!step.allFinite()) break;
    }
    if (!converged) continue;
    const bool interior = std::all_of(u.begin(), u.end(), [](double v) { return v > 1e-9; }) &&
                          empty_density(u) > 1e-9;
    if (interior && distance_to_known(u, m) > 1e-6) report.unexpected.push_back(u);
  }
  return report;
}

bool on_coexistence_line(const ModelParams& m) noexcept {
  const double r1 = m.lambda1 * m.p1, r2 = m.lambda2 * m.p2;
  return std::abs(r1 - r2) <= 1e-12 * std::max({1.0, std::abs(r1), std::abs(r2)});
}

std::vector<FixedPointReport> fixed_points(const ModelParams& m, const FixedPointOptions& opt) {
  std::vector<FixedPointReport> out;
  out.push_back(make_report(MFState{}, FixedPointKind::trivial, m));
  const double r1 = m.lambda1 * m.p1, r2 = m.lambda2 * m.p2;
  if (r1 > 1.0) out.push_back(make_report(q1_point(m), FixedPointKind::Q1, m));
  if (r2 > 1.0) out.push_back(make_report(q2_point(m), FixedPointKind::Q2, m));
  if (on_coexistence_line(m) && r1 > 1.0) {
    FixedPointReport r = make_report(p_theta_point(m, 0.5), FixedPointKind::P_theta, m);
    r.theta = 0.5;
    out.push_back(r);
  }
  if (opt.verify_uniqueness) {
    const ScanReport scan = scan_interior_fixed_points(m, opt.mesh);
    if (!scan.unexpected.empty()) {
      throw InvariantViolation("residual scan found an interior fixed point off the analytic set");
    }
  }
  return out;
}

Eigen::Matrix2d jacobian_single(const SingleState& u, double lambda, double p) {
  const double q = 1.0 - p;
  const double a = 1.0 - 2.0 * u[0] - u[1];
  Eigen::Matrix2d j;
  j << lambda * p * a - 1.0, -lambda * p * u[0],
       lambda * q * a, -lambda * q * u[0] - 1.0;
  return j;
}

TraceDet trace_det(const SingleState& u, double lambda, double p) {
  const Eigen::Matrix2d j = jacobian_single(u, lambda, p);
  return {j.trace(), j.determinant()};
}

Eigen::Matrix4d jacobian_two(const MFState& u, const ModelParams& m) {
  const double u0 = empty_density(u);
  const double a1 = m.lambda1 * m.p1, b1 = m.lambda1 * m.q(1);
  const double a2 = m.lambda2 * m.p2, b2 = m.lambda2 * m.q(2);
  const double x1 = u[0], x2 = u[2];
  Eigen::Matrix4d j;
  j << a1 * (u0 - x1) - 1.0, -a1 * x1, -a1 * x1, -a1 * x1,
       b1 * (u0 - x1), -b1 * x1 - 1.0, -b1 * x1, -b1 * x1,
       -a2 * x2, -a2 * x2, a2 * (u0 - x2) - 1.0, -a2 * x2,
       -b2 * x2, -b2 * x2, b2 * (u0 - x2), -b2 * x2 - 1.0;
  return j;
}

Eigen::Matrix4d jacobian_two_fd(const MFState& u, const ModelParams& m, double h) {
  Eigen::Matrix4d j;
  for (std::size_t c = 0; c < 4; ++c) {
    MFState up = u, dn = u;
    up[c] += h;
    dn[c] -= h;
    const MFState fu = rhs_two_unchecked(up, m), fd = rhs_two_unchecked(dn, m);
    for (std::size_t r = 0; r < 4; ++r) {
      j(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = (fu[r] - fd[r]) / (2 * h);
    }
  }
  return j;
}

std::vector<std::complex<double>> eigenvalues(const Eigen::Matrix2d& m) {
  const double tr = m.trace(), det = m.determinant();
  const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr / 4.0 - det));
  return {tr / 2.0 + disc, tr / 2.0 - disc};
}

std::vector<std::complex<double>> eigenvalues(const Eigen::Matrix4d& m) {
  Eigen::EigenSolver<Eigen::Matrix4d> solver(m, false);
  const auto ev = solver.eigenvalues();
  return {ev[0], ev[1], ev[2], ev[3]};
}

std::array<double, 5> characteristic_polynomial(const Eigen::Matrix4d& a) {
  // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k.
  std::array<double, 5> c{};
  c[0] = 1.0;
  Eigen::Matrix4d mk = Eigen::Matrix4d::Zero();
  for (int k = 1; k <= 4; ++k) {
    mk = a * mk + c[static_cast<std::size_t>(k - 1)] * Eigen::Matrix4d::Identity();
    c[static_cast<std::size_t>(k)] = -(a * mk).trace() / k;
  }
  return c;
}

std::vector<double> spectrum_q1(const ModelParams& m) {
  const double r1 = m.lambda1 * m.p1, r2 = m.lambda2 * m.p2;
  if (!(r1 > 1.0)) throw ConfigError("Q1 lies outside the simplex unless lambda1 p1 > 1");
  std::vector<double> s{-1.0, -1.0, 1.0 - r1, r2 / r1 - 1.0};
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

std::array<double, 5> charpoly_p_theta(const ModelParams& m, double theta) {
  const double r1 = m.lambda1 * m.p1;
  if (!on_coexistence_line(m) || !(r1 > 1.0)) {
    throw ConfigError("P_theta needs lambda1 p1 = lambda2 p2 > 1");
  }
  if (!(theta > 0.0 && theta < 1.0)) throw ConfigError("theta must lie in (0,1)");
  const double alpha = 1.0 - r1;
  // X (X+1)^2 (X - alpha) = X^4 + (2 - alpha) X^3 + (1 - 2 alpha) X^2 - alpha X.
  return {1.0, 2.0 - alpha, 1.0 - 2.0 * alpha, -alpha, 0.0};
}

double dulac_divergence(const SingleState& u, double lambda, double p) {
  if (!(u[0] > 0.0 && u[1] > 0.0 && u[0] + u[1] < 1.0)) {
    throw ConfigError("Dulac divergence needs a point in the open simplex");
  }
  const double q = 1.0 - p;
  return -lambda * p / u[1] - lambda * q * (1.0 - u[0]) / (u[1] * u[1]);
}

Outcome classify_outcome(const ModelParams& m) {
  const double r1 = m.lambda1 * m.p1, r2 = m.lambda2 * m.p2;
  if (std::max(r1, r2) <= 1.0) return Outcome::extinction;
  if (on_coexistence_line(m)) return Outcome::coexistence;
  return r1 > r2 ? Outcome::type1_wins : Outcome::type2_wins;
}

std::array<double, 2> gamma2_residual(const MFState& u, const ModelParams& m) {
  return {m.q(1) * u[0] - m.p1 * u[1], m.q(2) * u[2] - m.p2 * u[3]};
}

}  // namespace scp::meanfield
