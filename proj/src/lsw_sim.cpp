#include "lsw/lsw_sim.hpp"

#include <cmath>
#include <string>

#include "lsw/error.hpp"
#include "lsw/kernels.hpp"

namespace lsw {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double piecewise_value(const PiecewiseAmplitude& p, double z) {
  std::size_t i = 0;
  while (i < p.breaks.size() && z >= p.breaks[i]) ++i;
  return p.values[i];
}

void validate_piecewise(const PiecewiseAmplitude& p) {
  if (p.values.empty() || p.breaks.size() + 1 != p.values.size())
    throw ConfigError("piecewise amplitude needs one more value than breakpoints");
  for (std::size_t i = 0; i < p.breaks.size(); ++i) {
    if (!(p.breaks[i] > 0.0 && p.breaks[i] < 1.0) || (i > 0 && p.breaks[i] <= p.breaks[i - 1]))
      throw ConfigError("piecewise breakpoints must increase strictly within (0, 1)");
  }
}

void require_finite(const std::vector<double>& path, int j) {
  for (std::size_t t = 0; t < path.size(); ++t) {
    if (!std::isfinite(path[t]))
      throw DataError("nonfinite amplitude at scale " + std::to_string(j) + ", t=" + std::to_string(t));
  }
}

}  // namespace

double ews(const AmplitudeSpec& spec, Scale j, double z) {
  if (!(z >= 0.0 && z <= 1.0)) throw DomainError("rescaled time z=" + std::to_string(z) + " outside [0, 1]");
  if (j.value() > spec.num_scales())
    throw DomainError("scale j=" + std::to_string(j.value()) + " not present in amplitude spec");
  const auto& source = spec.scales[static_cast<std::size_t>(j.value() - 1)];
  const double amplitude = std::visit(
      Overloaded{
          [](const ConstantAmplitude& c) { return c.value; },
          [z](const PiecewiseAmplitude& p) {
            validate_piecewise(p);
            return piecewise_value(p, z);
          },
          [z](const PathAmplitude& p) {
            if (p.path.empty()) throw ConfigError("empty amplitude path");
            const auto n = static_cast<double>(p.path.size());
            const auto idx = std::min(static_cast<std::size_t>(std::floor(z * n)), p.path.size() - 1);
            return p.path[idx];
          },
          [z](const FunctionAmplitude& f) { return f.fn(z); },
          [](const RandomWalkAmplitude&) -> double {
            throw DomainError("random-walk amplitude has no deterministic spectrum; use the realized path");
          },
      },
      source);
  return amplitude * amplitude;
}

std::vector<double> resolve_amplitude(const AmplitudeSource& source, double sigma2, std::int64_t length,
                                      std::mt19937_64& rng) {
  const auto n = static_cast<std::size_t>(length);
  const double inv_length = 1.0 / static_cast<double>(length);
  return std::visit(
      Overloaded{
          [n](const ConstantAmplitude& c) { return std::vector<double>(n, c.value); },
          [n, inv_length](const PiecewiseAmplitude& p) {
            validate_piecewise(p);
            std::vector<double> path(n);
            for (std::size_t k = 0; k < n; ++k) path[k] = piecewise_value(p, static_cast<double>(k) * inv_length);
            return path;
          },
          [n](const PathAmplitude& p) {
            if (p.path.size() != n)
              throw ConfigError("explicit amplitude path has length " + std::to_string(p.path.size()) +
                                ", expected " + std::to_string(n));
            return p.path;
          },
          [n, inv_length](const FunctionAmplitude& f) {
            if (!f.fn) throw ConfigError("amplitude function is empty");
            std::vector<double> path(n);
            for (std::size_t k = 0; k < n; ++k) path[k] = f.fn(static_cast<double>(k) * inv_length);
            return path;
          },
          [n, sigma2, &rng](const RandomWalkAmplitude& r) {
            std::normal_distribution<double> step(0.0, std::sqrt(sigma2));
            std::vector<double> path(n);
            path[0] = r.initial;
            for (std::size_t k = 1; k < n; ++k) path[k] = path[k - 1] + (sigma2 > 0.0 ? step(rng) : 0.0);
            return path;
          },
      },
      source);
}

LswRealization simulate_lsw(const AmplitudeSpec& spec, std::int64_t length, std::uint64_t seed) {
  const int num_scales = spec.num_scales();
  if (num_scales < 1) throw ConfigError("amplitude spec has no scales");
  const Scale top(num_scales, spec.max_scale);
  if (length < top.support())
    throw ConfigError("series length " + std::to_string(length) + " shorter than 2^J = " +
                      std::to_string(top.support()));
  if (!spec.sigma2.empty() && spec.sigma2.size() != spec.scales.size())
    throw ConfigError("sigma2 must have one entry per scale");
  for (double s : spec.sigma2) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("sigma2 entries must be finite and nonnegative");
  }

  const std::int64_t presample = top.support() - 1;
  const auto total = static_cast<std::size_t>(length + presample);
  const auto n = static_cast<std::size_t>(length);

  LswRealization out;
  out.num_scales = num_scales;
  out.length = length;
  out.seed = seed;
  out.y.assign(n, 0.0);
  out.x.resize(static_cast<std::size_t>(num_scales));
  out.xi.resize(static_cast<std::size_t>(num_scales));
  out.w.resize(static_cast<std::size_t>(num_scales));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& xi : out.xi) {
    xi.first_time = -presample;
    xi.values.resize(total);
    for (double& v : xi.values) v = normal(rng);
  }
  for (int j = 1; j <= num_scales; ++j) {
    auto& path = out.w[static_cast<std::size_t>(j - 1)];
    path = resolve_amplitude(spec.scales[static_cast<std::size_t>(j - 1)], spec.sigma2_at(j), length, rng);
    require_finite(path, j);
  }

  std::vector<double> weighted(total);
  for (int j = 1; j <= num_scales; ++j) {
    const auto idx = static_cast<std::size_t>(j - 1);
    const HaarCoeffs psi = haar_coeffs(Scale(j, spec.max_scale));
    const auto& path = out.w[idx];
    // Pre-sample amplitudes are held at w_j0.
    std::vector<double> amp(total);
    for (std::size_t i = 0; i < total; ++i)
      amp[i] = i < static_cast<std::size_t>(presample) ? path[0] : path[i - static_cast<std::size_t>(presample)];
    kernels::multiply(amp, out.xi[idx].values, weighted);

    // Only lags 0..2^j-1 matter, so start the window 2^j-1 samples before t=0.
    const std::size_t lead = static_cast<std::size_t>(presample - (psi.scale.support() - 1));
    auto& x = out.x[idx];
    x.resize(n);
    kernels::correlate(std::span<const double>(weighted).subspan(lead), psi.values, x);
    for (std::size_t t = 0; t < n; ++t) out.y[t] += x[t];
  }
  return out;
}

std::vector<double> reconstruct(const LswRealization& r) {
  std::vector<double> y(static_cast<std::size_t>(r.length), 0.0);
  for (int j = 1; j <= r.num_scales; ++j) {
    const auto idx = static_cast<std::size_t>(j - 1);
    const HaarCoeffs psi = haar_coeffs(Scale(j, r.num_scales));
    for (std::int64_t t = 0; t < r.length; ++t) {
      double acc = 0.0;
      for (std::int64_t l = 0; l < psi.scale.support(); ++l) {
        const std::int64_t k = t - l;
        const double wk = r.w[idx][static_cast<std::size_t>(std::max<std::int64_t>(k, 0))];
        acc += psi.values[static_cast<std::size_t>(l)] * wk * r.xi[idx].at(k);
      }
      y[static_cast<std::size_t>(t)] += acc;
    }
  }
  return y;
}

std::int64_t MaSegmentSpec::total_length() const {
  std::int64_t total = 0;
  for (const auto& s : segments) total += s.length;
  return total;
}

ConcatMaSeries simulate_concat_ma(const MaSegmentSpec& spec, std::uint64_t seed) {
  if (spec.segments.empty()) throw ConfigError("concatenated MA spec has no segments");
  for (std::size_t i = 0; i < spec.segments.size(); ++i) {
    const auto& s = spec.segments[i];
    const std::string where = "segment " + std::to_string(i);
    if (s.length <= 0) throw ConfigError(where + ": length must be positive");
    if (s.coefficients.empty()) throw ConfigError(where + ": needs at least one MA coefficient");
    if (!(s.variance >= 0.0) || !std::isfinite(s.variance)) throw ConfigError(where + ": variance must be >= 0");
    for (double c : s.coefficients) {
      if (!std::isfinite(c)) throw DataError(where + ": nonfinite MA coefficient");
    }
  }

  ConcatMaSeries out;
  out.y.reserve(static_cast<std::size_t>(spec.total_length()));
  out.segment.reserve(out.y.capacity());
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < spec.segments.size(); ++i) {
    const auto& s = spec.segments[i];
    const std::size_t order = s.coefficients.size() - 1;
    std::normal_distribution<double> innovation(0.0, std::sqrt(s.variance));
    std::vector<double> e(static_cast<std::size_t>(s.length) + order);
    for (double& v : e) v = innovation(rng);
    std::vector<double> y(static_cast<std::size_t>(s.length));
    kernels::correlate(e, s.coefficients, y);
    out.y.insert(out.y.end(), y.begin(), y.end());
    out.segment.insert(out.segment.end(), y.size(), static_cast<int>(i));
  }
  return out;
}

MaSegmentSpec default_concat_ma_spec() {
  return MaSegmentSpec{{
      {{1.0, 0.9}, 1.0, 128},
      {{1.0}, 2.0, 128},
      {{1.0, -0.5}, 0.5, 128},
      {{1.0, 0.3, 0.3}, 1.0, 128},
  }};
}

}  // namespace lsw
