#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scp/model.hpp"

namespace scp::meanfield {

/// (u+, u-) of the single-type system.
using SingleState = std::array<double, 2>;
/// (u+1, u-1, u+2, u-2); the empty density is 1 minus the sum.
using MFState = std::array<double, 4>;

inline constexpr double kSimplexTolerance = 1e-9;

template <std::size_t N>
double empty_density(const std::array<double, N>& u) noexcept {
  double s = 1.0;
  for (double v : u) s -= v;
  return s;
}

/// Throws ConfigError when some coordinate is negative or the sum exceeds 1
/// by more than `tol`.
template <std::size_t N>
void require_in_simplex(const std::array<double, N>& u, double tol = 1e-12);

// --- vector fields -------------------------------------------------------

SingleState rhs_single(const SingleState& u, double lambda, double p);
MFState rhs_two(const MFState& u, const ModelParams& params);

// --- integration ---------------------------------------------------------

template <std::size_t N>
struct Solution {
  std::vector<double> time;
  std::vector<std::array<double, N>> state;
};

struct IntegrateOptions {
  double step = 1e-3;
  /// Spacing of recorded states; 0 records every step.
  double record_interval = 0.1;
};

/// Classical fixed-step RK4 over [0, t_end]. After each step, coordinates
/// within kSimplexTolerance of the simplex are clamped onto it; a larger
/// excursion throws ConfigError.
Solution<2> integrate_single(double lambda, double p, const SingleState& u0, double t_end,
                             const IntegrateOptions& options = {});
Solution<4> integrate_two(const ModelParams& params, const MFState& u0, double t_end,
                          const IntegrateOptions& options = {});

/// First recorded time from which the solution stays within `tol` (sup
/// norm) of `target` for at least `sustain` time units; nullopt otherwise.
template <std::size_t N>
std::optional<double> convergence_time(const Solution<N>& sol, const std::array<double, N>& target,
                                       double tol = 1e-6, double sustain = 10.0);

// --- fixed points ----------------------------------------------------------

/// (1 - 1/(lambda p)) (p, q); lies in the simplex iff lambda p > 1.
SingleState interior_point(double lambda, double p);
MFState q1_point(const ModelParams& params);
MFState q2_point(const ModelParams& params);
/// theta Q1 + (1 - theta) Q2.
MFState p_theta_point(const ModelParams& params, double theta);

enum class FixedPointKind { trivial, Q, Q1, Q2, P_theta };
enum class Stability { stable, unstable, marginal };

const char* to_string(FixedPointKind k) noexcept;
const char* to_string(Stability s) noexcept;

struct FixedPointReport {
  MFState location{};
  FixedPointKind kind = FixedPointKind::trivial;
  std::optional<double> theta;
  bool exists_in_simplex = true;
  std::vector<double> eigenvalues;  // real parts, descending
  Stability stability = Stability::marginal;
};

Stability classify_spectrum(const std::vector<double>& eigenvalues, double tol = 1e-9);

/// Single-type fixed points: the origin always, Q iff lambda p > 1.
/// Locations use the first two coordinates.
std::vector<FixedPointReport> fixed_points_single(double lambda, double p);

struct ScanReport {
  std::size_t grid_points = 0;
  std::size_t candidates = 0;
  std::size_t polished = 0;
  /// Interior fixed points found by the scan that are not among the
  /// analytic ones. Expected empty.
  std::vector<MFState> unexpected;
};

/// Residual scan of the interior of the 4-simplex on the grid with spacing
/// 1/mesh, followed by Newton polishing of the low-residual points.
ScanReport scan_interior_fixed_points(const ModelParams& params, int mesh = 200,
                                      std::size_t max_polish = 400);

struct FixedPointOptions {
  bool verify_uniqueness = true;
  int mesh = 200;
};

/// The trivial point always; Q1 iff lambda1 p1 > 1; Q2 iff lambda2 p2 > 1;
/// on the coexistence line lambda1 p1 = lambda2 p2 > 1 also one P_theta
/// entry (theta = 1/2) standing for the whole segment. Throws
/// InvariantViolation if the uniqueness scan finds an unexpected point.
std::vector<FixedPointReport> fixed_points(const ModelParams& params,
                                           const FixedPointOptions& options = {});

// --- linearization ---------------------------------------------------------

Eigen::Matrix2d jacobian_single(const SingleState& u, double lambda, double p);

struct TraceDet {
  double trace = 0.0;
  double det = 0.0;
};
TraceDet trace_det(const SingleState& u, double lambda, double p);

/// Jacobian of the two-type system.
Eigen::Matrix4d jacobian_two(const MFState& u, const ModelParams& params);

/// Central-difference Jacobian, used to check jacobian_two.
Eigen::Matrix4d jacobian_two_fd(const MFState& u, const ModelParams& params, double h = 1e-6);

std::vector<std::complex<double>> eigenvalues(const Eigen::Matrix2d& m);
std::vector<std::complex<double>> eigenvalues(const Eigen::Matrix4d& m);

/// Coefficients of det(X I - m), highest degree first, by Faddeev-LeVerrier.
std::array<double, 5> characteristic_polynomial(const Eigen::Matrix4d& m);

/// {-1, -1, 1 - lambda1 p1, lambda2 p2 / (lambda1 p1) - 1}, descending.
/// Throws ConfigError unless lambda1 p1 > 1.
std::vector<double> spectrum_q1(const ModelParams& params);

/// Coefficients of X (X + 1)^2 (X - alpha), alpha = 1 - lambda1 p1, highest
/// first. Throws ConfigError off the line lambda1 p1 = lambda2 p2 > 1 or for
/// theta outside (0, 1).
std::array<double, 5> charpoly_p_theta(const ModelParams& params, double theta);

/// Divergence of (F+, F-) / (u+ u-) for the single-type field; negative on
/// the open simplex. Throws ConfigError on the boundary.
double dulac_divergence(const SingleState& u, double lambda, double p);

enum class Outcome { extinction, type1_wins, type2_wins, coexistence };
const char* to_string(Outcome o) noexcept;

/// Ties lambda1 p1 = lambda2 p2 > 1 count as coexistence (relative tolerance 1e-12).
/// The case max(lambda_i p_i) = 1 is reported as extinction.
Outcome classify_outcome(const ModelParams& params);

/// (q1 u+1 - p1 u-1, q2 u+2 - p2 u-2); zero on the invariant plane through Q1 and Q2.
std::array<double, 2> gamma2_residual(const MFState& u, const ModelParams& params);

bool on_coexistence_line(const ModelParams& params) noexcept;

}  // namespace scp::meanfield
