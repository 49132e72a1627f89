#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lsw {

/// Smoothing parameter: a fixed lambda >= 0 or selection by generalized
/// cross-validation.
struct SplineLambda {
  bool use_gcv = false;
  double value = 0.0;

  static SplineLambda gcv() { return {true, 0.0}; }
  static SplineLambda fixed(double lambda) { return {false, lambda}; }
};

struct SplineFit {
  std::vector<double> fitted;
  double lambda = 0.0;
  double edf = 0.0;        ///< trace of the hat matrix
  double gcv_score = 0.0;  ///< n RSS / (n - edf)^2
};

/// Cubic smoothing spline through index-equispaced points (unit spacing),
/// minimizing sum (y_i - g_i)^2 + lambda * int g''^2. Reinsch form with a
/// banded LDL' solve; edf from the band of the inverse.
SplineFit fit_smoothing_spline(std::span<const double> values, double lambda);

/// Candidate lambdas used by GCV: 25 log-spaced values spanning
/// 1e-4..1e4 times n^2.
std::vector<double> gcv_lambda_grid(std::size_t n);

/// Grid-search GCV; the first minimizer wins. ConfigError for fewer than 4 points.
SplineFit fit_smoothing_spline_gcv(std::span<const double> values);

std::vector<double> spline_smooth(std::span<const double> values, SplineLambda lambda);

}  // namespace lsw
