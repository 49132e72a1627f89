#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "lsw/error.hpp"
#include "lsw/spline.hpp"
#include "oracles.hpp"

using namespace lsw;

namespace {

std::vector<double> noisy_sine(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / 40.0) + noise(rng);
  return y;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("zero lambda interpolates") {
  const auto y = noisy_sine(50, 1);
  CHECK(max_abs_diff(spline_smooth(y, SplineLambda::fixed(0.0)), y) <= 1e-8);
  const auto fit = fit_smoothing_spline(y, 0.0);
  CHECK(fit.edf == 50.0);
}

TEST_CASE("linear input is reproduced") {
  std::vector<double> y(30);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = 1.5 - 0.25 * static_cast<double>(i);
  for (double lambda : {0.01, 1.0, 1e3, 1e8}) CHECK(max_abs_diff(spline_smooth(y, SplineLambda::fixed(lambda)), y) <= 1e-8);
  CHECK(max_abs_diff(spline_smooth(y, SplineLambda::gcv()), y) <= 1e-8);
}

TEST_CASE("large lambda approaches the least squares line") {
  const auto y = noisy_sine(40, 2);
  const double n = 40.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double x = static_cast<double>(i);
    sx += x;
    sy += y[i];
    sxx += x * x;
    sxy += x * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icept = (sy - slope * sx) / n;
  const auto g = spline_smooth(y, SplineLambda::fixed(1e12));
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(g[i] - (icept + slope * static_cast<double>(i))) < 1e-4);
}

TEST_CASE("banded solve agrees with the dense oracle") {
  for (std::size_t n : {5u, 17u, 64u}) {
    const auto y = noisy_sine(n, n);
    for (double lambda : {0.1, 3.0, 250.0}) {
      const auto fit = fit_smoothing_spline(y, lambda);
      const auto dense = oracle::dense_smoothing_spline(y, lambda);
      double rss = 0.0;
      for (std::size_t i = 0; i < n; ++i) rss += (fit.fitted[i] - dense[i]) * (fit.fitted[i] - dense[i]);
      CHECK(rss <= 1e-6);
      CHECK(max_abs_diff(fit.fitted, dense) < 1e-9);
      CHECK(fit.edf == doctest::Approx(oracle::dense_spline_edf(n, lambda)).epsilon(1e-9));
    }
  }
}

TEST_CASE("GCV selection") {
  const auto y = noisy_sine(80, 3);
  const auto grid = gcv_lambda_grid(y.size());
  REQUIRE(grid.size() == 25);
  CHECK(grid.back() / grid.front() == doctest::Approx(1e8));
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);

  const auto best = fit_smoothing_spline_gcv(y);
  for (double lambda : grid) CHECK(best.gcv_score <= fit_smoothing_spline(y, lambda).gcv_score);
  CHECK(best.edf > 2.0);
  CHECK(best.edf < 80.0);

  // Direct GCV oracle at the chosen lambda.
  const auto dense = oracle::dense_smoothing_spline(y, best.lambda);
  double rss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) rss += (y[i] - dense[i]) * (y[i] - dense[i]);
  const double df = 80.0 - oracle::dense_spline_edf(80, best.lambda);
  CHECK(best.gcv_score == doctest::Approx(80.0 * rss / (df * df)).epsilon(1e-8));
}

TEST_CASE("spline errors") {
  CHECK_THROWS_AS(spline_smooth(std::vector<double>{1.0, 2.0, 3.0}, SplineLambda::gcv()), ConfigError);
  CHECK_THROWS_AS(spline_smooth(std::vector<double>{1.0, 2.0, 3.0, 4.0}, SplineLambda::fixed(-1.0)), DomainError);
  CHECK_THROWS_AS(spline_smooth(std::vector<double>{1.0, 2.0, 3.0, 4.0}, SplineLambda::fixed(std::nan(""))), DomainError);
  CHECK(spline_smooth(std::vector<double>{1.0, 5.0}, SplineLambda::fixed(10.0)) == std::vector<double>{1.0, 5.0});
}
