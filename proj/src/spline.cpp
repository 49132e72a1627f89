#include "lsw/spline.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lsw/error.hpp"

namespace lsw {
namespace {

// Symmetric pentadiagonal matrix stored by bands: diag[i] = B(i,i),
// off1[i] = B(i,i+1), off2[i] = B(i,i+2).
struct Pentadiagonal {
  std::vector<double> diag, off1, off2;
};

// B = L D L' with unit lower-triangular L of bandwidth 2:
// l1[i] = L(i+1,i), l2[i] = L(i+2,i).
struct BandLdl {
  std::vector<double> d, l1, l2;
};

BandLdl factorize(const Pentadiagonal& b) {
  const std::size_t m = b.diag.size();
  BandLdl f{std::vector<double>(m), std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
  for (std::size_t i = 0; i < m; ++i) {
    double d = b.diag[i];
    if (i >= 1) d -= f.l1[i - 1] * f.l1[i - 1] * f.d[i - 1];
    if (i >= 2) d -= f.l2[i - 2] * f.l2[i - 2] * f.d[i - 2];
    if (!(d > 0.0)) throw NumericalError("smoothing-spline system is not positive definite");
    f.d[i] = d;
    if (i + 1 < m) {
      double v = b.off1[i];
      if (i >= 1) v -= f.l2[i - 1] * f.l1[i - 1] * f.d[i - 1];
      f.l1[i] = v / d;
    }
    if (i + 2 < m) f.l2[i] = b.off2[i] / d;
  }
  return f;
}

std::vector<double> solve(const BandLdl& f, std::vector<double> rhs) {
  const std::size_t m = f.d.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (i >= 1) rhs[i] -= f.l1[i - 1] * rhs[i - 1];
    if (i >= 2) rhs[i] -= f.l2[i - 2] * rhs[i - 2];
  }
  for (std::size_t i = 0; i < m; ++i) rhs[i] /= f.d[i];
  for (std::size_t i = m; i-- > 0;) {
    if (i + 1 < m) rhs[i] -= f.l1[i] * rhs[i + 1];
    if (i + 2 < m) rhs[i] -= f.l2[i] * rhs[i + 2];
  }
  return rhs;
}

// Central band (|i-j| <= 2) of B^{-1} from its LDL' factors
// (Hutchinson and de Hoog recursion).
Pentadiagonal inverse_band(const BandLdl& f) {
  const std::size_t m = f.d.size();
  Pentadiagonal s{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
  auto sym = [&](std::size_t i, std::size_t j) -> double {
    if (i > j) std::swap(i, j);
    if (j >= m) return 0.0;
    switch (j - i) {
      case 0: return s.diag[i];
      case 1: return s.off1[i];
      case 2: return s.off2[i];
      default: return 0.0;
    }
  };
  for (std::size_t i = m; i-- > 0;) {
    const double a = i + 1 < m ? f.l1[i] : 0.0;
    const double b = i + 2 < m ? f.l2[i] : 0.0;
    if (i + 2 < m) s.off2[i] = -a * sym(i + 1, i + 2) - b * sym(i + 2, i + 2);
    if (i + 1 < m) s.off1[i] = -a * sym(i + 1, i + 1) - b * sym(i + 2, i + 1);
    s.diag[i] = 1.0 / f.d[i] - a * sym(i + 1, i) - b * sym(i + 2, i);
  }
  return s;
}

}  // namespace

SplineFit fit_smoothing_spline(std::span<const double> values, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw DomainError("spline lambda must be finite and nonnegative, got " + std::to_string(lambda));
  const std::size_t n = values.size();
  SplineFit fit;
  fit.lambda = lambda;
  fit.fitted.assign(values.begin(), values.end());
  fit.edf = static_cast<double>(n);
  if (n < 3 || lambda == 0.0) return fit;

  // Unit knot spacing: R has 2/3 on the diagonal and 1/6 off it; Q'Q has
  // bands (6, -4, 1).
  const std::size_t m = n - 2;
  Pentadiagonal system{std::vector<double>(m, 2.0 / 3.0 + 6.0 * lambda),
                       std::vector<double>(m, 1.0 / 6.0 - 4.0 * lambda), std::vector<double>(m, lambda)};
  const BandLdl factors = factorize(system);

  std::vector<double> rhs(m);
  for (std::size_t i = 0; i < m; ++i) rhs[i] = values[i] - 2.0 * values[i + 1] + values[i + 2];
  const std::vector<double> gamma = solve(factors, std::move(rhs));

  double rss = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double qg = 0.0;
    if (k < m) qg += gamma[k];
    if (k >= 1 && k - 1 < m) qg -= 2.0 * gamma[k - 1];
    if (k >= 2) qg += gamma[k - 2];
    fit.fitted[k] = values[k] - lambda * qg;
    const double r = values[k] - fit.fitted[k];
    rss += r * r;
  }

  // tr(I - A) = lambda * tr(Q'Q B^{-1}).
  const Pentadiagonal inv = inverse_band(factors);
  double trace = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    trace += 6.0 * inv.diag[i];
    if (i + 1 < m) trace += 2.0 * -4.0 * inv.off1[i];
    if (i + 2 < m) trace += 2.0 * inv.off2[i];
  }
  const double resid_df = lambda * trace;
  fit.edf = static_cast<double>(n) - resid_df;
  fit.gcv_score = static_cast<double>(n) * rss / (resid_df * resid_df);
  return fit;
}

std::vector<double> gcv_lambda_grid(std::size_t n) {
  constexpr int kPoints = 25;
  const double reference = static_cast<double>(n) * static_cast<double>(n);
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i) grid[static_cast<std::size_t>(i)] = reference * std::pow(10.0, -4.0 + i / 3.0);
  return grid;
}

SplineFit fit_smoothing_spline_gcv(std::span<const double> values) {
  if (values.size() < 4)
    throw ConfigError("GCV spline selection needs at least 4 points, got " + std::to_string(values.size()));
  SplineFit best;
  best.gcv_score = std::numeric_limits<double>::infinity();
  for (double lambda : gcv_lambda_grid(values.size())) {
    SplineFit fit = fit_smoothing_spline(values, lambda);
    if (fit.gcv_score < best.gcv_score) best = std::move(fit);
  }
  // Exactly linear data has zero RSS everywhere; any lambda reproduces it.
  if (best.fitted.empty()) best = fit_smoothing_spline(values, gcv_lambda_grid(values.size()).front());
  return best;
}

std::vector<double> spline_smooth(std::span<const double> values, SplineLambda lambda) {
  if (lambda.use_gcv) return fit_smoothing_spline_gcv(values).fitted;
  return fit_smoothing_spline(values, lambda.value).fitted;
}

}  // namespace lsw
