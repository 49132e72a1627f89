#include "lsw/kalman.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lsw/error.hpp"

namespace lsw {
namespace {

void symmetrize(Eigen::MatrixXd& m) { m = 0.5 * (m + m.transpose()).eval(); }

}  // namespace

std::vector<double> FilterOutput::loglik_increments() const {
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.loglik_increment);
  return out;
}

FilterOutput kf_run(const StateSpaceModel& model, std::span<const double> y) {
  const Eigen::Index n_state = model.num_scales;
  const Eigen::Index steps = model.steps();
  if (model.designs.cols() != n_state || model.state_noise.size() != n_state ||
      model.prior.mean.size() != n_state || model.prior.cov.rows() != n_state)
    throw ConfigError("state-space model dimensions are inconsistent");
  if (static_cast<std::int64_t>(y.size()) != model.start_time + steps)
    throw ConfigError("observation series has " + std::to_string(y.size()) + " entries, model expects " +
                      std::to_string(model.start_time + steps));

  FilterOutput out;
  out.states.reserve(static_cast<std::size_t>(steps));
  out.pred_mean.reserve(static_cast<std::size_t>(steps));
  out.pred_var.reserve(static_cast<std::size_t>(steps));
  out.observed.reserve(static_cast<std::size_t>(steps));

  const Eigen::MatrixXd noise = model.state_noise.asDiagonal();
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n_state, n_state);
  Eigen::VectorXd mean = model.prior.mean;
  Eigen::MatrixXd cov = model.prior.cov;

  for (Eigen::Index i = 0; i < steps; ++i) {
    const std::int64_t t = model.time_at(i);
    FilterState state;
    state.t = t;
    if (i > 0) cov += noise;
    state.pred_mean = mean;
    state.pred_cov = cov;

    const Eigen::VectorXd a = model.designs.row(i).transpose();
    const Eigen::VectorXd pa = cov * a;
    const double q = a.dot(pa) + model.obs_var;
    if (!(q > 0.0) || !std::isfinite(q))
      throw NumericalError("innovation variance " + std::to_string(q) + " not positive at t=" + std::to_string(t));
    const double e = y[static_cast<std::size_t>(t)] - a.dot(mean);
    const Eigen::VectorXd gain = pa / q;

    mean += gain * e;
    const Eigen::MatrixXd ika = identity - gain * a.transpose();
    cov = ika * cov * ika.transpose() + model.obs_var * gain * gain.transpose();
    symmetrize(cov);

    state.mean = mean;
    state.cov = cov;
    state.loglik_increment = -0.5 * (std::log(2.0 * std::numbers::pi * q) + e * e / q);
    out.total_loglik += state.loglik_increment;
    out.pred_mean.push_back(y[static_cast<std::size_t>(t)] - e);
    out.pred_var.push_back(q);
    out.observed.push_back(y[static_cast<std::size_t>(t)]);
    out.states.push_back(std::move(state));
  }
  return out;
}

SmootherOutput rts_smooth(const StateSpaceModel& /*model*/, const FilterOutput& filtered) {
  const std::size_t n = filtered.states.size();
  SmootherOutput out;
  if (n == 0) return out;
  out.t.resize(n);
  out.mean.resize(n);
  out.cov.resize(n);
  out.t[n - 1] = filtered.states[n - 1].t;
  out.mean[n - 1] = filtered.states[n - 1].mean;
  out.cov[n - 1] = filtered.states[n - 1].cov;

  for (std::size_t i = n - 1; i-- > 0;) {
    const FilterState& cur = filtered.states[i];
    const FilterState& next = filtered.states[i + 1];
    Eigen::LLT<Eigen::MatrixXd> llt(next.pred_cov);
    if (llt.info() != Eigen::Success)
      throw NumericalError("singular predicted covariance at t=" + std::to_string(next.t));
    // Identity transition: G = P_t * Ppred_{t+1}^{-1}.
    const Eigen::MatrixXd gain = llt.solve(cur.cov).transpose();
    out.t[i] = cur.t;
    out.mean[i] = cur.mean + gain * (out.mean[i + 1] - next.pred_mean);
    Eigen::MatrixXd cov = cur.cov + gain * (out.cov[i + 1] - next.pred_cov) * gain.transpose();
    symmetrize(cov);
    out.cov[i] = std::move(cov);
  }
  return out;
}

std::vector<Forecast> predict(const StateSpaceModel& model, const FilterOutput& filtered,
                              const Eigen::MatrixXd& future_designs) {
  if (future_designs.rows() < 1) throw ConfigError("forecast horizon must be at least 1");
  if (future_designs.cols() != model.num_scales)
    throw ConfigError("future designs must have one column per scale");
  if (filtered.states.empty()) throw ConfigError("cannot forecast from an empty filter run");
  const FilterState& last = filtered.states.back();
  const Eigen::MatrixXd noise = model.state_noise.asDiagonal();
  std::vector<Forecast> out;
  out.reserve(static_cast<std::size_t>(future_designs.rows()));
  Eigen::MatrixXd cov = last.cov;
  for (Eigen::Index h = 0; h < future_designs.rows(); ++h) {
    cov += noise;
    const Eigen::VectorXd a = future_designs.row(h).transpose();
    out.push_back({a.dot(last.mean), a.dot(cov * a) + model.obs_var});
  }
  return out;
}

std::vector<double> sequential_bayes_factor(std::span<const double> loglik_a, std::span<const double> loglik_b) {
  if (loglik_a.size() != loglik_b.size())
    throw ConfigError("likelihood streams differ in length: " + std::to_string(loglik_a.size()) + " vs " +
                      std::to_string(loglik_b.size()));
  std::vector<double> out(loglik_a.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    acc += loglik_a[i] - loglik_b[i];
    out[i] = acc;
  }
  return out;
}

double msfe(std::span<const double> pred_means, std::span<const double> actuals) {
  if (pred_means.size() != actuals.size()) throw ConfigError("forecast and actual series differ in length");
  if (pred_means.empty()) throw DomainError("mean square forecast error of an empty series");
  double acc = 0.0;
  for (std::size_t i = 0; i < actuals.size(); ++i) {
    const double d = pred_means[i] - actuals[i];
    acc += d * d;
  }
  return acc / static_cast<double>(actuals.size());
}

}  // namespace lsw
