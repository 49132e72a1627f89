#include <cmath>
#include <random>

#include "doctest.h"
#include "lsw/decomp.hpp"
#include "lsw/error.hpp"

using namespace lsw;

namespace {

LaggedSeries series(std::int64_t first, std::vector<double> v) { return {first, std::move(v)}; }

LaggedSeries random_series(std::mt19937_64& rng, std::int64_t first, std::int64_t last, double sd = 1.0) {
  std::normal_distribution<double> normal(0.0, sd);
  LaggedSeries s{first, std::vector<double>(static_cast<std::size_t>(last - first + 1))};
  for (double& v : s.values) v = normal(rng);
  return s;
}

double direct_sum(int j, std::int64_t t, const LaggedSeries& w, const LaggedSeries& xi) {
  const auto psi = haar_coeffs(Scale(j)).values;
  double acc = 0.0;
  for (std::size_t l = 0; l < psi.size(); ++l) {
    const auto k = t - static_cast<std::int64_t>(l);
    acc += psi[l] * w.at(k) * xi.at(k);
  }
  return acc;
}

// Path w_{anchor_time+s} = anchor + zeta_{anchor_time+1} + ... + zeta_{anchor_time+s}.
LaggedSeries path_from_anchor(double anchor, std::int64_t anchor_time, std::int64_t t, const LaggedSeries& zeta) {
  LaggedSeries w{anchor_time, {anchor}};
  for (std::int64_t s = anchor_time + 1; s <= t; ++s) w.values.push_back(w.values.back() + zeta.at(s));
  return w;
}

}  // namespace

TEST_CASE("tvma coefficients") {
  const double r = std::sqrt(0.5);
  auto a = tvma_coeffs(Scale(1), 5, series(0, std::vector<double>(8, 1.0)));
  REQUIRE(a.alpha.size() == 2);
  CHECK(a.alpha[0] == doctest::Approx(r));
  CHECK(a.alpha[1] == doctest::Approx(-r));

  a = tvma_coeffs(Scale(1), 1, series(0, {2.0, 3.0}));
  CHECK(a.alpha[0] == doctest::Approx(3.0 * r));
  CHECK(a.alpha[1] == doctest::Approx(-2.0 * r));

  std::mt19937_64 rng(4);
  const auto w = random_series(rng, -3, 10);
  const auto c = tvma_coeffs(Scale(2), 7, w);
  const auto psi = haar_coeffs(Scale(2)).values;
  for (std::size_t l = 0; l < 4; ++l) CHECK(std::abs(c.alpha[l] - psi[l] * w.at(7 - static_cast<int>(l))) < 1e-12);

  CHECK_THROWS_AS(tvma_coeffs(Scale(2), 2, series(0, {1, 1, 1, 1})), RangeError);
}

TEST_CASE("tvma evaluation") {
  const LaggedSeries w = series(0, std::vector<double>(6, 1.0));
  CHECK(eval_tvma(Scale(1), 3, w, series(0, std::vector<double>(6, 0.0))) == 0.0);
  CHECK(eval_tvma(Scale(1), 3, w, series(0, std::vector<double>(6, 1.0))) == doctest::Approx(0.0));

  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 20; ++rep) {
    const auto wr = random_series(rng, -10, 30);
    const auto xr = random_series(rng, -10, 30);
    CHECK(std::abs(eval_tvma(Scale(3), 20, wr, xr) - direct_sum(3, 20, wr, xr)) < 1e-12);
  }
  CHECK_THROWS_AS(eval_tvma(Scale(3), 3, w, series(0, std::vector<double>(6, 1.0))), RangeError);
}

TEST_CASE("design components") {
  CHECK(build_design(Scale(2), 5, series(0, std::vector<double>(8, 0.0))) == 0.0);
  CHECK(build_design(Scale(1), 1, series(0, {-1.0, 1.0})) == doctest::Approx(1.41421356).epsilon(1e-8));

  std::mt19937_64 rng(8);
  const auto xi = random_series(rng, -7, 40);
  const auto psi = haar_coeffs(Scale(3)).values;
  for (std::int64_t t = 0; t <= 40; ++t) {
    double direct = 0.0;
    for (std::size_t k = 0; k < psi.size(); ++k) direct += psi[k] * xi.at(t - static_cast<std::int64_t>(k));
    CHECK(std::abs(build_design(Scale(3), t, xi) - direct) < 1e-12);
  }
  const auto batch = design_series(Scale(3), xi, 0, 40);
  for (std::int64_t t = 0; t <= 40; ++t) CHECK(std::abs(batch[t] - build_design(Scale(3), t, xi)) < 1e-12);
  CHECK_THROWS_AS(build_design(Scale(3), -1, xi), RangeError);
}

TEST_CASE("decomposition without evolution collapses to the anchor term") {
  std::mt19937_64 rng(1);
  const auto xi = random_series(rng, 0, 20);
  const LaggedSeries zeta = series(0, std::vector<double>(21, 0.0));
  for (int j = 1; j <= 3; ++j) {
    const double anchor = 1.7;
    CHECK(eval_decomposed(Scale(j), 12, anchor, zeta, xi) == build_design(Scale(j), 12, xi) * anchor);
  }
}

TEST_CASE("decomposition identity against the time-varying MA form") {
  std::mt19937_64 rng(2718);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int j = 1; j <= 4; ++j) {
    const std::int64_t len = std::int64_t{1} << j;
    for (int rep = 0; rep < 200; ++rep) {
      const std::int64_t t = len + rep % 7;
      const auto xi = random_series(rng, 0, t);
      const auto zeta = random_series(rng, 0, t, 0.3);
      const double anchor = normal(rng);
      const auto w = path_from_anchor(anchor, t - len + 1, t, zeta);
      const double lhs = eval_tvma(Scale(j), t, w, xi);
      const double rhs = eval_decomposed(Scale(j), t, anchor, zeta, xi);
      CHECK(std::abs(lhs - rhs) < 1e-12);
    }
  }
}

TEST_CASE("scale 1 and 2 noise terms match the explicit expansions") {
  std::mt19937_64 rng(31);
  const auto xi = random_series(rng, 0, 10);
  const auto zeta = random_series(rng, 0, 10);
  const auto p1 = haar_coeffs(Scale(1)).values;
  const auto p2 = haar_coeffs(Scale(2)).values;
  const std::int64_t t = 8;
  // Scale 1: psi_{1,0} zeta_t xi_t.
  CHECK(std::abs(decomposition_noise(Scale(1), t, zeta, xi) - p1[0] * zeta.at(t) * xi.at(t)) < 1e-14);
  // Scale 2: six cross terms.
  const double z2 = zeta.at(t - 2), z1 = zeta.at(t - 1), z0 = zeta.at(t);
  const double expected = p2[0] * (z2 + z1 + z0) * xi.at(t) + p2[1] * (z2 + z1) * xi.at(t - 1) +
                          p2[2] * z2 * xi.at(t - 2);
  CHECK(std::abs(decomposition_noise(Scale(2), t, zeta, xi) - expected) < 1e-14);
}

TEST_CASE("observation-noise variance") {
  CHECK(obs_noise_variance(Scale(1), 1.0) == doctest::Approx(0.5));
  CHECK(obs_noise_variance(Scale(2), 1.0) == doctest::Approx(1.5));
  for (int j = 1; j <= 6; ++j) {
    CHECK(obs_noise_variance(Scale(j), 0.0) == 0.0);
    const double v = obs_noise_variance(Scale(j), 0.37);
    CHECK(obs_noise_variance(Scale(j), 0.74) == 2.0 * v);
  }
  // sum_k 2^{-j}(2^j - k - 1) over the support = (2^j - 1) / 2.
  CHECK(obs_noise_variance(Scale(3), 1.0) == doctest::Approx(3.5));
  CHECK_THROWS_AS(obs_noise_variance(Scale(1), -0.1), DomainError);
}

TEST_CASE("Monte Carlo variance of the noise term") {
  std::mt19937_64 rng(123);
  const int draws = 100000;
  for (int j = 1; j <= 3; ++j) {
    const std::int64_t len = std::int64_t{1} << j;
    const double sigma2 = 0.5;
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    for (int d = 0; d < draws; ++d) {
      const auto xi = random_series(rng, 0, len - 1);
      const auto zeta = random_series(rng, 0, len - 1, std::sqrt(sigma2));
      const double nu = decomposition_noise(Scale(j), len - 1, zeta, xi);
      s1 += nu;
      s2 += nu * nu;
      s4 += nu * nu * nu * nu;
    }
    const double mean = s1 / draws;
    const double var = s2 / draws - mean * mean;
    const double se = std::sqrt((s4 / draws - (s2 / draws) * (s2 / draws)) / draws);
    CHECK(std::abs(var - obs_noise_variance(Scale(j), sigma2)) < 3.0 * se);
  }
}

TEST_CASE("design moments") {
  std::mt19937_64 rng(77);
  for (int j = 1; j <= 3; ++j) {
    const auto xi = random_series(rng, 0, 200000);
    const std::int64_t len = std::int64_t{1} << j;
    // Non-overlapping windows give independent draws of A_jt.
    double s1 = 0.0, s2 = 0.0;
    int n = 0;
    for (std::int64_t t = len - 1; t <= 200000; t += len, ++n) {
      const double a = build_design(Scale(j), t, xi);
      s1 += a;
      s2 += a * a;
    }
    const double mean = s1 / n;
    CHECK(std::abs(mean) < 3.0 / std::sqrt(n));
    CHECK(std::abs(s2 / n - mean * mean - 1.0) < 3.0 * std::sqrt(2.0 / n));
  }
}

TEST_CASE("model assembly") {
  std::mt19937_64 rng(5);
  std::vector<LaggedSeries> xi1 = {random_series(rng, 0, 49)};
  const double s1[] = {1.0};
  const auto m1 = assemble_model(1, s1, xi1, 50, diffuse_prior(1, 100.0));
  CHECK(m1.start_time == 2);
  CHECK(m1.steps() == 48);
  CHECK(m1.obs_var == doctest::Approx(0.5));
  CHECK(m1.state_noise(0) == 1.0);
  for (Eigen::Index i = 0; i < m1.steps(); ++i)
    CHECK(std::abs(m1.designs(i, 0) - build_design(Scale(1), m1.time_at(i), xi1[0])) < 1e-12);

  std::vector<LaggedSeries> xi2 = {random_series(rng, 0, 49), random_series(rng, 0, 49)};
  const double zero[] = {0.0, 0.0};
  const double ones[] = {1.0, 1.0};
  const auto m0 = assemble_model(2, zero, xi2, 50, diffuse_prior(2, 1.0));
  CHECK(m0.obs_var == 0.0);
  CHECK(m0.start_time == 4);
  CHECK(assemble_model(2, ones, xi2, 50, diffuse_prior(2, 1.0)).obs_var == doctest::Approx(2.0));
  CHECK(StateSpaceModel::calendar_time(2, 10) == 7);

  CHECK_THROWS_AS(assemble_model(2, s1, xi2, 50, diffuse_prior(2, 1.0)), ConfigError);
  CHECK_THROWS_AS(assemble_model(2, ones, xi1, 50, diffuse_prior(2, 1.0)), ConfigError);
  CHECK_THROWS_AS(assemble_model(2, ones, xi2, 50, diffuse_prior(1, 1.0)), ConfigError);
  CHECK_THROWS_AS(assemble_model(2, ones, xi2, 4, diffuse_prior(2, 1.0)), ConfigError);
  CHECK_THROWS_AS(diffuse_prior(2, 0.0), ConfigError);
}
