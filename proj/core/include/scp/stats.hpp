#pragma once

#include <cstddef>
#include <vector>

namespace scp::stats {

double mean(const std::vector<double>& x);
/// Unbiased sample variance; 0 for fewer than two values.
double variance(const std::vector<double>& x);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov
/// distribution for the p-value (effective size n m / (n + m)).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Survival function of the Kolmogorov distribution, P(K > x).
double kolmogorov_sf(double x);

struct Interval {
  double lower = 0.0;
  double upper = 1.0;
};

/// Wilson score interval for a binomial proportion at normal quantile z.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

/// One-sided Mann-Whitney test of "a tends to be larger than b"; normal
/// approximation with tie correction. Returns the p-value.
double mann_whitney_greater(const std::vector<double>& a, const std::vector<double>& b);

double normal_cdf(double x);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = intercept + slope x; needs at least 3 points
/// for a standard error.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace scp::stats
