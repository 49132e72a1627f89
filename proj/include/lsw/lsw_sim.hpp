#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "lsw/series.hpp"
#include "lsw/wavelet.hpp"

namespace lsw {

/// w_jk = value for all k.
struct ConstantAmplitude {
  double value = 0.0;
};

/// Piecewise constant in rescaled time z = k/T: values[0] on [0, breaks[0]),
/// values[i] on [breaks[i-1], breaks[i]), the last value up to and including 1.
struct PiecewiseAmplitude {
  std::vector<double> values;
  std::vector<double> breaks;
};

/// Explicit amplitude path w_j0..w_j,T-1.
struct PathAmplitude {
  std::vector<double> path;
};

/// Rescaled-time function W_j(z), sampled at z = k/T.
struct FunctionAmplitude {
  std::function<double(double)> fn;
  std::string label;
};

/// Random walk w_jt = w_j,t-1 + zeta_jt, zeta_jt ~ N(0, sigma2_j), started at `initial`.
struct RandomWalkAmplitude {
  double initial = 0.0;
};

using AmplitudeSource =
    std::variant<ConstantAmplitude, PiecewiseAmplitude, PathAmplitude, FunctionAmplitude, RandomWalkAmplitude>;

struct AmplitudeSpec {
  std::vector<AmplitudeSource> scales;  ///< one source per scale, index j-1
  std::vector<double> sigma2;           ///< per-scale evolution variance; empty means all zero
  int max_scale = kDefaultMaxScale;

  int num_scales() const noexcept { return static_cast<int>(scales.size()); }
  double sigma2_at(int j) const { return sigma2.empty() ? 0.0 : sigma2.at(static_cast<std::size_t>(j - 1)); }
};

/// Evolutionary wavelet spectrum S_j(z) = |W_j(z)|^2 for deterministic
/// sources. Paths are read at index min(floor(zT), T-1). Random-walk sources
/// have no deterministic spectrum and raise DomainError.
double ews(const AmplitudeSpec& spec, Scale j, double z);

/// One simulated LSW process with every latent variable retained.
struct LswRealization {
  int num_scales = 0;
  std::int64_t length = 0;
  std::uint64_t seed = 0;
  std::vector<double> y;                  ///< y_t, t = 0..T-1
  std::vector<std::vector<double>> x;     ///< x[j-1][t]
  std::vector<LaggedSeries> xi;           ///< xi[j-1], first_time = -(2^J - 1)
  std::vector<std::vector<double>> w;     ///< w[j-1][t], amplitude path used
};

/// Amplitude path over t = 0..T-1 for one scale. Random-walk sources consume
/// T-1 normal draws from rng.
std::vector<double> resolve_amplitude(const AmplitudeSource& source, double sigma2, std::int64_t length,
                                      std::mt19937_64& rng);

LswRealization simulate_lsw(const AmplitudeSpec& spec, std::int64_t length, std::uint64_t seed);

/// Recompute y from the stored latents; used to check that a realization is
/// self-consistent.
std::vector<double> reconstruct(const LswRealization& r);

struct MaSegment {
  std::vector<double> coefficients;  ///< c_0..c_q, y_t = sum_i c_i e_{t-i}
  double variance = 1.0;             ///< Var(e_t)
  std::int64_t length = 0;
};

struct MaSegmentSpec {
  std::vector<MaSegment> segments;
  std::int64_t total_length() const;
};

struct ConcatMaSeries {
  std::vector<double> y;
  std::vector<int> segment;  ///< segment index per sample
};

/// Concatenation of independent stationary MA segments. Each segment draws
/// fresh innovations, including its own q pre-sample values.
ConcatMaSeries simulate_concat_ma(const MaSegmentSpec& spec, std::uint64_t seed);

/// Four-regime benchmark: 128 samples each of MA(1) 0.9, white noise with
/// variance 2, MA(1) -0.5 with variance 0.5, MA(2) (0.3, 0.3).
MaSegmentSpec default_concat_ma_spec();

}  // namespace lsw
