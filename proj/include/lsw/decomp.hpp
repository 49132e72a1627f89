#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "lsw/series.hpp"
#include "lsw/wavelet.hpp"

namespace lsw {

/// TVMA(2^j - 1) coefficients at time t: alpha[l] = psi_{j,-l} * w_{j,t-l}.
struct TvmaCoeffs {
  Scale scale;
  std::int64_t t;
  std::vector<double> alpha;
};

/// Requires w defined at t-2^j+1..t; throws RangeError otherwise.
TvmaCoeffs tvma_coeffs(Scale j, std::int64_t t, const LaggedSeries& w);

/// x_jt = sum_l alpha_jt^(l) xi_{j,t-l}.
double eval_tvma(Scale j, std::int64_t t, const LaggedSeries& w, const LaggedSeries& xi);

/// Design component A_jt = sum_{k=0}^{2^j-1} psi_{j,-k} xi_{j,t-k}.
double build_design(Scale j, std::int64_t t, const LaggedSeries& xi);

/// A_jt for every t in from..to, computed with the correlation kernel.
std::vector<double> design_series(Scale j, const LaggedSeries& xi, std::int64_t from, std::int64_t to);

/// Observation-noise term of the random-walk decomposition,
///   nu_jt = sum_{k=0}^{2^j-2} sum_{m=k}^{2^j-2} psi_{j,-k} xi_{j,t-k} zeta_{j,t-m}.
/// zeta must cover t-2^j+2..t.
double decomposition_noise(Scale j, std::int64_t t, const LaggedSeries& zeta, const LaggedSeries& xi);

/// x_jt written as A_jt * w_{j,t-2^j+1} + nu_jt, where w_anchor is
/// w_{j,t-2^j+1} and later amplitudes are its random-walk continuation.
double eval_decomposed(Scale j, std::int64_t t, double w_anchor, const LaggedSeries& zeta, const LaggedSeries& xi);

/// Var(nu_jt) = sigma2 * sum_k psi_{j,-k}^2 (2^j - k - 1). DomainError for
/// negative sigma2.
double obs_noise_variance(Scale j, double sigma2);

struct GaussianPrior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// N(0, kappa I) over J states.
GaussianPrior diffuse_prior(int num_scales, double kappa);

/// Superposed scalar-observation model
///   y_t = A_t' s_t + nu_t,  s_t = s_{t-1} + zeta_t,
/// where component j of s_t is w_{j,t-2^j+1}. Row i of `designs` is A_t at
/// t = start_time + i.
struct StateSpaceModel {
  int num_scales = 0;
  std::int64_t start_time = 0;
  Eigen::MatrixXd designs;
  double obs_var = 0.0;
  Eigen::VectorXd state_noise;  ///< diagonal of Var(zeta_t)
  GaussianPrior prior;          ///< distribution of s at start_time before its observation

  Eigen::Index steps() const noexcept { return designs.rows(); }
  std::int64_t time_at(Eigen::Index step) const noexcept { return start_time + step; }
  /// Calendar time of component j of the state held at model time t.
  static std::int64_t calendar_time(int j, std::int64_t t) noexcept { return t - (std::int64_t{1} << j) + 1; }
};

/// Rows A_t for t = from..to over scales 1..J.
Eigen::MatrixXd design_matrix(int num_scales, const std::vector<LaggedSeries>& xi, std::int64_t from,
                              std::int64_t to, int max_scale = kDefaultMaxScale);

/// Model over t = 2^J..length-1. xi[j-1] must cover t-2^j+1 for every such t.
StateSpaceModel assemble_model(int num_scales, std::span<const double> sigma2, const std::vector<LaggedSeries>& xi,
                               std::int64_t length, const GaussianPrior& prior, int max_scale = kDefaultMaxScale);

}  // namespace lsw
