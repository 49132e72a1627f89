#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "lsw/decomp.hpp"

namespace lsw {

struct FilterState {
  std::int64_t t = 0;
  Eigen::VectorXd pred_mean;  ///< state mean given y up to t-1
  Eigen::MatrixXd pred_cov;
  Eigen::VectorXd mean;       ///< state mean given y up to t
  Eigen::MatrixXd cov;
  double loglik_increment = 0.0;
};

struct FilterOutput {
  std::vector<FilterState> states;
  std::vector<double> pred_mean;  ///< one-step predictive mean of y_t
  std::vector<double> pred_var;   ///< one-step predictive variance of y_t
  std::vector<double> observed;   ///< y_t at each step
  double total_loglik = 0.0;

  std::vector<double> loglik_increments() const;
};

struct SmootherOutput {
  std::vector<std::int64_t> t;
  std::vector<Eigen::VectorXd> mean;
  std::vector<Eigen::MatrixXd> cov;
};

struct Forecast {
  double mean = 0.0;
  double var = 0.0;
};

/// Kalman filter for the random-walk state with time-varying scalar design.
/// `y` is indexed by calendar time from 0 and must have start_time + steps
/// entries; values before start_time are ignored. The prior is the state
/// distribution at start_time, so the first step has no prediction noise.
/// Covariance updates use the Joseph form and are symmetrized.
FilterOutput kf_run(const StateSpaceModel& model, std::span<const double> y);

/// Fixed-interval (Rauch-Tung-Striebel) smoother.
SmootherOutput rts_smooth(const StateSpaceModel& model, const FilterOutput& filtered);

/// Forecasts of y at the h = future_designs.rows() times after the last
/// filtered step, row i holding A at horizon i+1.
std::vector<Forecast> predict(const StateSpaceModel& model, const FilterOutput& filtered,
                              const Eigen::MatrixXd& future_designs);

/// Cumulative log Bayes factor of stream a against stream b.
std::vector<double> sequential_bayes_factor(std::span<const double> loglik_a, std::span<const double> loglik_b);

/// Mean squared forecast error. DomainError on empty input.
double msfe(std::span<const double> pred_means, std::span<const double> actuals);

}  // namespace lsw
