#include "lsw/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lsw/error.hpp"
#include "lsw/kernels.hpp"

namespace lsw {
namespace {

// Haar coefficients reversed so that a dot product with the contiguous
// window xi_{t-L+1..t} gives sum_k psi_{-k} xi_{t-k}.
std::vector<double> reversed_haar(Scale j) {
  auto values = haar_coeffs(j).values;
  std::reverse(values.begin(), values.end());
  return values;
}

}  // namespace

TvmaCoeffs tvma_coeffs(Scale j, std::int64_t t, const LaggedSeries& w) {
  const std::int64_t len = j.support();
  if (!w.covers(t - len + 1, t))
    throw RangeError("amplitude path lacks history for scale " + std::to_string(j.value()) + " at t=" +
                     std::to_string(t));
  const HaarCoeffs psi = haar_coeffs(j);
  TvmaCoeffs out{j, t, std::vector<double>(static_cast<std::size_t>(len))};
  for (std::int64_t l = 0; l < len; ++l)
    out.alpha[static_cast<std::size_t>(l)] = psi.values[static_cast<std::size_t>(l)] * w.at(t - l);
  return out;
}

double eval_tvma(Scale j, std::int64_t t, const LaggedSeries& w, const LaggedSeries& xi) {
  const TvmaCoeffs coeffs = tvma_coeffs(j, t, w);
  const std::int64_t len = j.support();
  const auto lags = xi.window(t - len + 1, t);
  double acc = 0.0;
  for (std::int64_t l = 0; l < len; ++l)
    acc += coeffs.alpha[static_cast<std::size_t>(l)] * lags[static_cast<std::size_t>(len - 1 - l)];
  return acc;
}

double build_design(Scale j, std::int64_t t, const LaggedSeries& xi) {
  const std::int64_t len = j.support();
  return kernels::dot(reversed_haar(j), xi.window(t - len + 1, t));
}

std::vector<double> design_series(Scale j, const LaggedSeries& xi, std::int64_t from, std::int64_t to) {
  if (to < from) return {};
  const std::int64_t len = j.support();
  const auto input = xi.window(from - len + 1, to);
  std::vector<double> out(static_cast<std::size_t>(to - from + 1));
  kernels::correlate(input, haar_coeffs(j).values, out);
  return out;
}

double decomposition_noise(Scale j, std::int64_t t, const LaggedSeries& zeta, const LaggedSeries& xi) {
  const std::int64_t len = j.support();
  const HaarCoeffs psi = haar_coeffs(j);
  const auto z = zeta.window(t - len + 2, t);  // z[i] = zeta_{t-len+2+i}
  const auto x = xi.window(t - len + 1, t);    // x[i] = xi_{t-len+1+i}
  // Inner sums over m = k..len-2 accumulate as k decreases.
  double tail = 0.0;
  double acc = 0.0;
  for (std::int64_t k = len - 2; k >= 0; --k) {
    tail += z[static_cast<std::size_t>(len - 2 - k)];
    acc += psi.values[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(len - 1 - k)] * tail;
  }
  return acc;
}

double eval_decomposed(Scale j, std::int64_t t, double w_anchor, const LaggedSeries& zeta, const LaggedSeries& xi) {
  return build_design(j, t, xi) * w_anchor + decomposition_noise(j, t, zeta, xi);
}

double obs_noise_variance(Scale j, double sigma2) {
  if (!(sigma2 >= 0.0)) throw DomainError("variance must be nonnegative, got " + std::to_string(sigma2));
  const HaarCoeffs psi = haar_coeffs(j);
  const std::int64_t len = j.support();
  double acc = 0.0;
  for (std::int64_t k = 0; k < len; ++k) {
    const double c = psi.values[static_cast<std::size_t>(k)];
    acc += c * c * static_cast<double>(len - k - 1);
  }
  return sigma2 * acc;
}

GaussianPrior diffuse_prior(int num_scales, double kappa) {
  if (num_scales < 1) throw ConfigError("prior needs at least one state");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ConfigError("prior variance must be positive and finite");
  return {Eigen::VectorXd::Zero(num_scales), kappa * Eigen::MatrixXd::Identity(num_scales, num_scales)};
}

Eigen::MatrixXd design_matrix(int num_scales, const std::vector<LaggedSeries>& xi, std::int64_t from,
                              std::int64_t to, int max_scale) {
  if (static_cast<int>(xi.size()) != num_scales)
    throw ConfigError("expected " + std::to_string(num_scales) + " xi series, got " + std::to_string(xi.size()));
  const Eigen::Index rows = std::max<Eigen::Index>(0, to - from + 1);
  Eigen::MatrixXd designs(rows, num_scales);
  for (int j = 1; j <= num_scales; ++j) {
    const auto column = design_series(Scale(j, max_scale), xi[static_cast<std::size_t>(j - 1)], from, to);
    designs.col(j - 1) = Eigen::Map<const Eigen::VectorXd>(column.data(), rows);
  }
  return designs;
}

StateSpaceModel assemble_model(int num_scales, std::span<const double> sigma2, const std::vector<LaggedSeries>& xi,
                               std::int64_t length, const GaussianPrior& prior, int max_scale) {
  const Scale top(num_scales, max_scale);
  if (static_cast<int>(sigma2.size()) != num_scales)
    throw ConfigError("sigma2 has " + std::to_string(sigma2.size()) + " entries for " + std::to_string(num_scales) +
                      " scales");
  if (prior.mean.size() != num_scales || prior.cov.rows() != num_scales || prior.cov.cols() != num_scales)
    throw ConfigError("prior dimension does not match the number of scales");
  const std::int64_t start = top.support();
  if (length <= start)
    throw ConfigError("series length " + std::to_string(length) + " leaves no filterable steps after t=" +
                      std::to_string(start));

  StateSpaceModel model;
  model.num_scales = num_scales;
  model.start_time = start;
  model.designs = design_matrix(num_scales, xi, start, length - 1, max_scale);
  model.state_noise.resize(num_scales);
  for (int j = 1; j <= num_scales; ++j) {
    const double s = sigma2[static_cast<std::size_t>(j - 1)];
    model.obs_var += obs_noise_variance(Scale(j, max_scale), s);
    model.state_noise(j - 1) = s;
  }
  model.prior = prior;
  return model;
}

}  // namespace lsw
