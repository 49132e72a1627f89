#include "lsw/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <thread>

#include "lsw/error.hpp"

namespace lsw {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double sample_variance(std::span<const double> y) {
  if (y.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(y.size() - 1);
}

struct ReplicateRun {
  bool ok = false;
  StateSpaceModel model;
  FilterOutput filtered;
  Eigen::MatrixXd future_designs;
};

ReplicateRun run_replicate(std::span<const double> y, const EstimationConfig& cfg, int id, double kappa) {
  const auto length = static_cast<std::int64_t>(y.size());
  std::mt19937_64 rng(replicate_seed(cfg.seed, id));
  std::normal_distribution<double> normal(0.0, 1.0);

  // In-sample draws for every scale first, then the forecast extension, so
  // the horizon never changes in-sample designs.
  std::vector<LaggedSeries> xi(static_cast<std::size_t>(cfg.num_scales));
  for (auto& series : xi) {
    series.first_time = 0;
    series.values.resize(static_cast<std::size_t>(length));
    for (double& v : series.values) v = normal(rng);
  }
  for (auto& series : xi) {
    for (int h = 0; h < cfg.horizon; ++h) series.values.push_back(normal(rng));
  }

  ReplicateRun run;
  run.model = assemble_model(cfg.num_scales, cfg.sigma2, xi, length, diffuse_prior(cfg.num_scales, kappa),
                             cfg.max_scale);
  if (cfg.horizon > 0)
    run.future_designs = design_matrix(cfg.num_scales, xi, length, length + cfg.horizon - 1, cfg.max_scale);
  try {
    run.filtered = kf_run(run.model, y);
    run.ok = true;
  } catch (const NumericalError&) {
    run.filtered = FilterOutput{};
  }
  return run;
}

// Per-scale S_raw (and mean/var) trajectories of one smoothed run.
struct RawSpectrum {
  std::vector<std::vector<double>> mean, var, s;
};

RawSpectrum raw_spectrum(const SmootherOutput& smoothed, int num_scales, SpectrumFunctional functional) {
  RawSpectrum out;
  const std::size_t n = smoothed.mean.size();
  out.mean.assign(static_cast<std::size_t>(num_scales), std::vector<double>(n));
  out.var = out.mean;
  out.s = out.mean;
  for (int j = 0; j < num_scales; ++j) {
    const auto sj = static_cast<std::size_t>(j);
    for (std::size_t i = 0; i < n; ++i) {
      const double m = smoothed.mean[i](j);
      const double v = std::max(0.0, smoothed.cov[i](j, j));
      out.mean[sj][i] = m;
      out.var[sj][i] = v;
      out.s[sj][i] = functional == SpectrumFunctional::mean_square ? m * m + v : m * m;
    }
  }
  return out;
}

}  // namespace

const char* to_string(ScoreRule rule) { return rule == ScoreRule::loglik ? "loglik" : "msfe"; }

const char* to_string(Aggregation aggregation) {
  return aggregation == Aggregation::best ? "best" : "weighted";
}

const char* to_string(SpectrumFunctional functional) {
  return functional == SpectrumFunctional::mean_square ? "mean-square" : "square-of-mean";
}

ScoreRule parse_score_rule(const std::string& text) {
  if (text == "loglik") return ScoreRule::loglik;
  if (text == "msfe" || text == "msfe-holdout") return ScoreRule::msfe_holdout;
  throw ConfigError("score-rule: expected loglik or msfe, got '" + text + "'");
}

Aggregation parse_aggregation(const std::string& text) {
  if (text == "best") return Aggregation::best;
  if (text == "weighted") return Aggregation::likelihood_weighted;
  throw ConfigError("aggregate: expected best or weighted, got '" + text + "'");
}

SpectrumFunctional parse_spectrum_functional(const std::string& text) {
  if (text == "mean-square") return SpectrumFunctional::mean_square;
  if (text == "square-of-mean") return SpectrumFunctional::square_of_mean;
  throw ConfigError("spectrum: expected mean-square or square-of-mean, got '" + text + "'");
}

void EstimationConfig::validate() const {
  if (num_scales < 1 || num_scales > max_scale)
    throw ConfigError("scales: must lie in 1.." + std::to_string(max_scale) + ", got " + std::to_string(num_scales));
  if (static_cast<int>(sigma2.size()) != num_scales)
    throw ConfigError("sigma2: expected " + std::to_string(num_scales) + " entries, got " +
                      std::to_string(sigma2.size()));
  for (double s : sigma2) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("sigma2: entries must be finite and nonnegative");
  }
  if (num_replicates < 1) throw ConfigError("num-replicates: must be at least 1");
  if (horizon < 0) throw ConfigError("horizon: must be nonnegative");
  if (score_rule == ScoreRule::msfe_holdout && !(holdout_fraction > 0.0 && holdout_fraction <= 0.5))
    throw ConfigError("holdout-fraction: must lie in (0, 0.5] under the msfe rule");
  if (!spline.use_gcv && (!(spline.value >= 0.0) || !std::isfinite(spline.value)))
    throw ConfigError("spline-lambda: must be a nonnegative number or 'gcv'");
  if (!(prior_scale > 0.0) || !std::isfinite(prior_scale)) throw ConfigError("prior-scale: must be positive");
  if (threads < 1) throw ConfigError("threads: must be at least 1");
}

ScoreSummary score_replicates(std::span<const FilterOutput> outputs, ScoreRule rule, ScoringWindow window) {
  if (outputs.empty()) throw ConfigError("no replicates to score");
  ScoreSummary summary;
  summary.replicates.resize(outputs.size());
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < outputs.size(); ++m) {
    const FilterOutput& out = outputs[m];
    ReplicateScore& rs = summary.replicates[m];
    rs.id = static_cast<int>(m) + 1;
    rs.msfe = std::numeric_limits<double>::quiet_NaN();
    if (out.states.empty()) {
      rs.score = -std::numeric_limits<double>::infinity();
      continue;
    }
    const std::size_t steps = out.states.size();
    if (window.burn_in >= steps) throw ConfigError("burn-in leaves no scored steps");
    if (rule == ScoreRule::msfe_holdout && (window.holdout == 0 || window.holdout > steps - window.burn_in))
      throw ConfigError("holdout window inconsistent with the msfe rule");
    rs.valid = true;
    for (std::size_t i = window.burn_in; i < steps; ++i) rs.loglik += out.states[i].loglik_increment;
    // Without a holdout the MSFE is reported over all scored steps.
    const std::size_t from = window.holdout > 0 ? steps - window.holdout : window.burn_in;
    rs.msfe = msfe(std::span(out.pred_mean).subspan(from), std::span(out.observed).subspan(from));
    rs.score = rule == ScoreRule::loglik ? rs.loglik : -rs.msfe;
    if (rs.score > best) {
      best = rs.score;
      summary.selected = rs.id;
    }
  }
  if (summary.selected == 0) throw NumericalError("estimation failed: every replicate was numerically degenerate");

  const auto sel = outputs[static_cast<std::size_t>(summary.selected - 1)].loglik_increments();
  const std::span<const double> sel_scored = std::span(sel).subspan(window.burn_in);
  for (std::size_t m = 0; m < outputs.size(); ++m) {
    ReplicateScore& rs = summary.replicates[m];
    if (!rs.valid) {
      rs.log_bf_vs_selected = std::numeric_limits<double>::infinity();
      continue;
    }
    const auto inc = outputs[m].loglik_increments();
    const auto bf = sequential_bayes_factor(sel_scored, std::span(inc).subspan(window.burn_in));
    rs.log_bf_vs_selected = bf.empty() ? 0.0 : bf.back();
  }
  return summary;
}

std::vector<double> log_returns(std::span<const double> prices) {
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (!(prices[i] > 0.0) || !std::isfinite(prices[i]))
      throw DataError("price at index " + std::to_string(i) + " is not positive: " + std::to_string(prices[i]));
  }
  std::vector<double> out;
  if (prices.size() < 2) return out;
  out.reserve(prices.size() - 1);
  for (std::size_t i = 1; i < prices.size(); ++i) out.push_back(std::log(prices[i]) - std::log(prices[i - 1]));
  return out;
}

std::uint64_t replicate_seed(std::uint64_t seed, int id) {
  return splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(id));
}

SpectrumEstimate estimate_spectrum(std::span<const double> y, const EstimationConfig& cfg) {
  cfg.validate();
  const Scale top(cfg.num_scales, cfg.max_scale);
  const auto length = static_cast<std::int64_t>(y.size());
  if (length < top.support() + 8)
    throw ConfigError("series of length " + std::to_string(length) + " too short for " +
                      std::to_string(cfg.num_scales) + " scales (need at least " +
                      std::to_string(top.support() + 8) + ")");
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i])) throw DataError("nonfinite observation at index " + std::to_string(i));
  }

  const double var_y = sample_variance(y);
  const double kappa = cfg.prior_scale * (var_y > 0.0 ? var_y : 1.0);
  const auto steps = static_cast<std::size_t>(length - top.support());

  ScoringWindow window;
  window.burn_in = cfg.exclude_burn_in ? std::min(static_cast<std::size_t>(top.support()), steps - 1) : 0;
  if (cfg.score_rule == ScoreRule::msfe_holdout) {
    window.holdout = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(cfg.holdout_fraction * static_cast<double>(steps))));
    if (window.holdout >= steps - window.burn_in)
      throw ConfigError("holdout-fraction leaves no in-sample steps after burn-in");
  }

  const auto num_reps = static_cast<std::size_t>(cfg.num_replicates);
  std::vector<ReplicateRun> runs(num_reps);
  {
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), num_reps);
    std::vector<std::exception_ptr> errors(workers);
    auto work = [&](std::size_t worker) {
      try {
        for (std::size_t m = worker; m < num_reps; m += workers)
          runs[m] = run_replicate(y, cfg, static_cast<int>(m) + 1, kappa);
      } catch (...) {
        errors[worker] = std::current_exception();
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
      for (auto& th : pool) th.join();
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<FilterOutput> outputs;
  outputs.reserve(num_reps);
  for (auto& run : runs) outputs.push_back(std::move(run.filtered));
  ScoreSummary summary = score_replicates(outputs, cfg.score_rule, window);

  SpectrumEstimate est;
  est.num_scales = cfg.num_scales;
  est.length = length;
  est.start_time = top.support();
  est.window = window;
  est.replicates = summary.replicates;
  est.selected = summary.selected;

  const std::size_t sel = static_cast<std::size_t>(summary.selected - 1);
  const FilterOutput& chosen = outputs[sel];
  for (const auto& s : chosen.states) est.stream_t.push_back(s.t);
  est.loglik_stream = chosen.loglik_increments();
  est.pred_mean = chosen.pred_mean;
  est.pred_var = chosen.pred_var;
  est.observed = chosen.observed;

  if (cfg.horizon > 0) {
    const auto fc = predict(runs[sel].model, chosen, runs[sel].future_designs);
    for (std::size_t h = 0; h < fc.size(); ++h)
      est.forecasts.push_back({length + static_cast<std::int64_t>(h), fc[h].mean, fc[h].var});
  }

  const bool need_all = cfg.aggregation == Aggregation::likelihood_weighted || cfg.retain_replicates;
  std::vector<RawSpectrum> spectra(num_reps);
  for (std::size_t m = 0; m < num_reps; ++m) {
    if (!est.replicates[m].valid || (!need_all && m != sel)) continue;
    spectra[m] = raw_spectrum(rts_smooth(runs[m].model, outputs[m]), cfg.num_scales, cfg.functional);
  }
  if (cfg.retain_replicates) {
    est.replicate_spectra.resize(num_reps);
    for (std::size_t m = 0; m < num_reps; ++m) est.replicate_spectra[m] = spectra[m].s;
  }

  RawSpectrum combined;
  if (cfg.aggregation == Aggregation::best) {
    combined = spectra[sel];
  } else {
    // Weights proportional to exp(score), over valid replicates.
    const double top_score = est.replicates[sel].score;
    std::vector<double> weights(num_reps, 0.0);
    double total = 0.0;
    for (std::size_t m = 0; m < num_reps; ++m) {
      if (!est.replicates[m].valid) continue;
      weights[m] = std::exp(est.replicates[m].score - top_score);
      total += weights[m];
    }
    combined = spectra[sel];
    for (int j = 0; j < cfg.num_scales; ++j) {
      const auto sj = static_cast<std::size_t>(j);
      for (std::size_t i = 0; i < steps; ++i) {
        double mean = 0.0, second = 0.0, s = 0.0;
        for (std::size_t m = 0; m < num_reps; ++m) {
          if (weights[m] == 0.0) continue;
          const double wm = weights[m] / total;
          const double mu = spectra[m].mean[sj][i];
          mean += wm * mu;
          second += wm * (mu * mu + spectra[m].var[sj][i]);
          s += wm * spectra[m].s[sj][i];
        }
        combined.mean[sj][i] = mean;
        combined.var[sj][i] = std::max(0.0, second - mean * mean);
        combined.s[sj][i] = s;
      }
    }
  }

  est.scales.resize(static_cast<std::size_t>(cfg.num_scales));
  for (int j = 1; j <= cfg.num_scales; ++j) {
    const auto sj = static_cast<std::size_t>(j - 1);
    ScaleEstimate& se = est.scales[sj];
    se.scale = j;
    se.t.resize(steps);
    for (std::size_t i = 0; i < steps; ++i)
      se.t[i] = StateSpaceModel::calendar_time(j, est.start_time + static_cast<std::int64_t>(i));
    se.w_mean = combined.mean[sj];
    se.w_var = combined.var[sj];
    se.s_raw = combined.s[sj];
    se.s_smoothed = spline_smooth(se.s_raw, cfg.spline);
    for (double& v : se.s_smoothed) v = std::max(0.0, v);
  }
  return est;
}

std::vector<SpectrumEstimate> estimate_panel(const std::vector<std::vector<double>>& columns,
                                             const EstimationConfig& cfg) {
  std::vector<SpectrumEstimate> out;
  out.reserve(columns.size());
  for (const auto& column : columns) out.push_back(estimate_spectrum(column, cfg));
  return out;
}

}  // namespace lsw
