#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lsw/kalman.hpp"
#include "lsw/spline.hpp"
#include "lsw/wavelet.hpp"

namespace lsw {

enum class ScoreRule { loglik, msfe_holdout };
enum class Aggregation { best, likelihood_weighted };
/// mean_square reports E[w^2 | y] = mean^2 + var; square_of_mean reports mean^2.
enum class SpectrumFunctional { mean_square, square_of_mean };

const char* to_string(ScoreRule rule);
const char* to_string(Aggregation aggregation);
const char* to_string(SpectrumFunctional functional);
ScoreRule parse_score_rule(const std::string& text);
Aggregation parse_aggregation(const std::string& text);
SpectrumFunctional parse_spectrum_functional(const std::string& text);

struct EstimationConfig {
  int num_scales = 1;
  std::vector<double> sigma2;  ///< known random-walk variance per scale
  int num_replicates = 50;
  std::uint64_t seed = 1;
  int horizon = 0;
  ScoreRule score_rule = ScoreRule::loglik;
  double holdout_fraction = 0.2;  ///< trailing share of steps scored under msfe_holdout
  SplineLambda spline = SplineLambda::gcv();
  Aggregation aggregation = Aggregation::best;
  SpectrumFunctional functional = SpectrumFunctional::mean_square;
  double prior_scale = 1e6;  ///< prior variance = prior_scale * sample variance of y
  bool exclude_burn_in = true;
  bool retain_replicates = false;
  int threads = 1;
  int max_scale = kDefaultMaxScale;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Scored filter runs are compared over steps [burn_in, steps); the MSFE
/// window is the trailing `holdout` steps.
struct ScoringWindow {
  std::size_t burn_in = 0;
  std::size_t holdout = 0;
};

struct ReplicateScore {
  int id = 0;  ///< 1-based
  bool valid = false;
  double loglik = 0.0;  ///< post burn-in log-likelihood
  double msfe = 0.0;    ///< one-step MSFE over the holdout window, or all scored steps
  double score = 0.0;
  double log_bf_vs_selected = 0.0;  ///< final cumulative log BF of the selected replicate against this one
};

struct ScoreSummary {
  std::vector<ReplicateScore> replicates;
  int selected = 0;
};

/// Empty FilterOutputs mark degenerate replicates; they are never selected.
/// NumericalError if every replicate is degenerate.
ScoreSummary score_replicates(std::span<const FilterOutput> outputs, ScoreRule rule, ScoringWindow window);

struct ScaleEstimate {
  int scale = 0;
  std::vector<std::int64_t> t;  ///< calendar time of each entry
  std::vector<double> w_mean;
  std::vector<double> w_var;
  std::vector<double> s_raw;
  std::vector<double> s_smoothed;
};

struct ForecastPoint {
  std::int64_t t = 0;
  double mean = 0.0;
  double var = 0.0;
};

struct SpectrumEstimate {
  int num_scales = 0;
  std::int64_t length = 0;
  std::int64_t start_time = 0;
  ScoringWindow window;
  std::vector<ScaleEstimate> scales;
  std::vector<ReplicateScore> replicates;
  int selected = 0;

  // Selected replicate, one entry per filter step.
  std::vector<std::int64_t> stream_t;
  std::vector<double> loglik_stream;
  std::vector<double> pred_mean;
  std::vector<double> pred_var;
  std::vector<double> observed;

  std::vector<ForecastPoint> forecasts;
  /// [replicate][scale][entry] unsmoothed spectrum, when retained.
  std::vector<std::vector<std::vector<double>>> replicate_spectra;
};

/// r_t = log p_t - log p_{t-1}. DataError naming the index of any
/// nonpositive price.
std::vector<double> log_returns(std::span<const double> prices);

/// Seed of replicate `id` derived from the run seed.
std::uint64_t replicate_seed(std::uint64_t seed, int id);

SpectrumEstimate estimate_spectrum(std::span<const double> y, const EstimationConfig& cfg);

/// Multi-series input: each column is estimated independently with the same
/// configuration (and therefore the same seeds).
std::vector<SpectrumEstimate> estimate_panel(const std::vector<std::vector<double>>& columns,
                                             const EstimationConfig& cfg);

}  // namespace lsw
