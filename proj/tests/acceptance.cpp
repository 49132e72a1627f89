// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "lsw/decomp.hpp"
#include "lsw/estimator.hpp"
#include "lsw/kalman.hpp"
#include "lsw/lsw_sim.hpp"
#include "lsw/wavelet.hpp"
#include "oracles.hpp"

using namespace lsw;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

LaggedSeries draws(std::mt19937_64& rng, std::int64_t first, std::int64_t last, double sd = 1.0) {
  std::normal_distribution<double> normal(0.0, sd);
  LaggedSeries s{first, std::vector<double>(static_cast<std::size_t>(last - first + 1))};
  for (double& v : s.values) v = normal(rng);
  return s;
}

Outcome haar_validity() {
  double worst_sum = 0.0, worst_ss = 0.0;
  for (int j = 1; j <= 6; ++j) {
    double s = 0.0, ss = 0.0;
    for (double v : haar_coeffs(Scale(j)).values) {
      s += v;
      ss += v * v;
    }
    worst_sum = std::max(worst_sum, std::abs(s));
    worst_ss = std::max(worst_ss, std::abs(ss - 1.0));
  }
  return {worst_sum <= 1e-12 && worst_ss <= 1e-12,
          "max |sum| " + fmt("%.2e", worst_sum) + ", max |sumsq-1| " + fmt("%.2e", worst_ss)};
}

Outcome decomposition_identity() {
  std::mt19937_64 rng(20240101);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int j = 1; j <= 4; ++j) {
    const std::int64_t len = std::int64_t{1} << j;
    for (int rep = 0; rep < 200; ++rep) {
      const std::int64_t t = len + rep % 11;
      const auto xi = draws(rng, 0, t);
      const auto zeta = draws(rng, 0, t, 0.5);
      const double anchor = normal(rng);
      LaggedSeries w{t - len + 1, {anchor}};
      for (std::int64_t s = t - len + 2; s <= t; ++s) w.values.push_back(w.values.back() + zeta.at(s));
      worst = std::max(worst, std::abs(eval_tvma(Scale(j), t, w, xi) - eval_decomposed(Scale(j), t, anchor, zeta, xi)));
    }
  }
  return {worst <= 1e-12, "max abs difference " + fmt("%.2e", worst) + " over 800 draw sets"};
}

Outcome noise_variance_law() {
  std::mt19937_64 rng(8);
  const int n = 100000;
  bool ok = true;
  double worst_z = 0.0;
  for (int j = 1; j <= 3; ++j) {
    const std::int64_t len = std::int64_t{1} << j;
    for (double sigma2 : {0.25, 1.0}) {
      double s1 = 0.0, s2 = 0.0, s4 = 0.0;
      for (int d = 0; d < n; ++d) {
        const auto xi = draws(rng, 0, len - 1);
        const auto zeta = draws(rng, 0, len - 1, std::sqrt(sigma2));
        const double nu = decomposition_noise(Scale(j), len - 1, zeta, xi);
        s1 += nu;
        s2 += nu * nu;
        s4 += nu * nu * nu * nu;
      }
      const double mean = s1 / n;
      const double var = s2 / n - mean * mean;
      const double se = std::sqrt((s4 / n - (s2 / n) * (s2 / n)) / n);
      const double z = std::abs(var - obs_noise_variance(Scale(j), sigma2)) / se;
      worst_z = std::max(worst_z, z);
      ok = ok && z < 3.0;
    }
  }
  return {ok, "worst |MC - analytic| = " + fmt("%.2f", worst_z) + " SE over 6 cases"};
}

bool close(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double& worst) {
  const double d = ((a - b).array().abs() / b.array().abs().max(1.0)).maxCoeff();
  worst = std::max(worst, d);
  return d <= 1e-8;
}

Outcome kalman_oracle() {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<int> steps_dist(1, 20), scales_dist(1, 2);
  bool ok = true;
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const int J = scales_dist(rng);
    const int T = steps_dist(rng);
    const auto model = oracle::random_model(rng, J, T);
    const auto y = oracle::random_series(rng, static_cast<std::size_t>(T), 1.5);
    const auto f = kf_run(model, y);
    const auto s = rts_smooth(model, f);
    const oracle::DenseGaussian dense(model, y);
    for (int i = 0; i < T; ++i) {
      const auto [fm, fc] = dense.conditional(i, i);
      const auto [sm, sc] = dense.conditional(i, T - 1);
      ok = close(f.states[i].mean, fm, worst) && ok;
      ok = close(f.states[i].cov, fc, worst) && ok;
      ok = close(s.mean[i], sm, worst) && ok;
      ok = close(s.cov[i], sc, worst) && ok;
    }
    const double ll = dense.loglik();
    const double d = std::abs(f.total_loglik - ll) / std::max(1.0, std::abs(ll));
    worst = std::max(worst, d);
    ok = ok && d <= 1e-8;
  }
  return {ok, "worst relative deviation " + fmt("%.2e", worst) + " over 50 instances"};
}

Outcome stationary_moments() {
  const std::size_t n = 100000;
  bool ok = true;
  double worst_z = 0.0;
  auto check = [&](std::vector<double> w, std::uint64_t seed) {
    AmplitudeSpec spec;
    for (double v : w) spec.scales.push_back(ConstantAmplitude{v});
    const auto r = simulate_lsw(spec, static_cast<std::int64_t>(n), seed);
    std::vector<double> gamma(std::size_t{1} << w.size(), 0.0);
    for (std::size_t j = 1; j <= w.size(); ++j) {
      const auto psi = haar_coeffs(Scale(static_cast<int>(j))).values;
      for (std::size_t h = 0; h < gamma.size(); ++h)
        for (std::size_t l = 0; l + h < psi.size(); ++l) gamma[h] += w[j - 1] * w[j - 1] * psi[l] * psi[l + h];
    }
    for (std::size_t h = 0; h < gamma.size() + 2; ++h) {
      const double expected = h < gamma.size() ? gamma[h] : 0.0;
      const double z = std::abs(oracle::sample_autocovariance(r.y, h) - expected) / oracle::bartlett_se(gamma, h, n);
      worst_z = std::max(worst_z, z);
      ok = ok && z < 3.0;
    }
  };
  check({1.0}, 1);
  check({1.0, 0.5, 2.0}, 2);
  return {ok, "worst |sample - analytic| = " + fmt("%.2f", worst_z) + " SE (J=1 and J=3)"};
}

Outcome regime_ordering() {
  int ordered = 0;
  const int seeds = 40;
  for (int seed = 1; seed <= seeds; ++seed) {
    AmplitudeSpec spec;
    spec.scales = {PiecewiseAmplitude{{2.0, 0.5}, {0.5}}};
    const auto r = simulate_lsw(spec, 512, 5000 + static_cast<std::uint64_t>(seed));
    EstimationConfig cfg;
    cfg.num_scales = 1;
    cfg.sigma2 = {0.01};
    cfg.seed = static_cast<std::uint64_t>(seed);
    const auto est = estimate_spectrum(r.y, cfg);
    const auto& sc = est.scales[0];
    double first = 0.0, second = 0.0;
    int n1 = 0, n2 = 0;
    for (std::size_t i = 0; i < sc.t.size(); ++i) {
      if (sc.t[i] < 256) {
        first += sc.s_smoothed[i];
        ++n1;
      } else {
        second += sc.s_smoothed[i];
        ++n2;
      }
    }
    if (first / n1 > second / n2) ++ordered;
  }
  return {ordered >= 38, std::to_string(ordered) + "/40 seeds ordered (need 38)"};
}

Outcome scoring_coherence() {
  bool bf_ok = true, det_ok = true, single_ok = true;
  double min_bf = 1e300;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    AmplitudeSpec spec;
    spec.scales = {ConstantAmplitude{1.0}, ConstantAmplitude{0.5}};
    const auto y = simulate_lsw(spec, 200, 70 + seed).y;
    EstimationConfig cfg;
    cfg.num_scales = 2;
    cfg.sigma2 = {0.02, 0.02};
    cfg.num_replicates = 20;
    cfg.seed = seed;
    const auto a = estimate_spectrum(y, cfg);
    const auto b = estimate_spectrum(y, cfg);
    det_ok = det_ok && a.selected == b.selected && a.scales[0].s_smoothed == b.scales[0].s_smoothed &&
             a.scales[1].s_smoothed == b.scales[1].s_smoothed;
    for (const auto& r : a.replicates) {
      min_bf = std::min(min_bf, r.log_bf_vs_selected);
      bf_ok = bf_ok && r.log_bf_vs_selected >= 0.0;
    }
    cfg.num_replicates = 1;
    single_ok = single_ok && estimate_spectrum(y, cfg).selected == 1;
  }
  return {bf_ok && det_ok && single_ok, "min final log BF " + fmt("%.3g", min_bf) +
                                            (det_ok ? ", deterministic" : ", NOT deterministic") +
                                            (single_ok ? ", M=1 selects 1" : ", M=1 selection wrong")};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli_round_trip() {
  const fs::path root = fs::temp_directory_path() / ("lsw_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  std::ostringstream sink;
  bool ran = true;
  for (const char* run : {"a", "b"}) {
    const std::string d = (root / run).string();
    ran = ran && cli::run({"simulate", "--scales", "2", "--length", "256", "--amplitude",
                           "piecewise:2/0.5:0.5,linear:0.5:1", "--seed", "11", "--out", d + "/sim"},
                          sink, sink) == 0;
    ran = ran && cli::run({"estimate", "--input", d + "/sim/realization.csv", "--scales", "2", "--num-replicates",
                           "10", "--horizon", "3", "--seed", "11", "--out", d + "/est"},
                          sink, sink) == 0;
    ran = ran && cli::run({"score", "--a", d + "/est/manifest.json", "--b", d + "/est/stream_y.csv", "--out",
                           d + "/score"},
                          sink, sink) == 0;
  }
  int compared = 0, identical = 0;
  if (ran) {
    for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
      if (entry.path().extension() != ".csv") continue;
      ++compared;
      const fs::path other = root / "b" / fs::relative(entry.path(), root / "a");
      if (fs::exists(other) && slurp(entry.path()) == slurp(other)) ++identical;
    }
  }
  fs::remove_all(root);
  return {ran && compared == 7 && identical == compared,
          ran ? std::to_string(identical) + "/" + std::to_string(compared) + " CSV files byte-identical"
              : "pipeline failed: " + sink.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "Haar validity", 1.0, haar_validity},
      {2, "Decomposition identity", 5.0, decomposition_identity},
      {3, "Noise-variance law", 30.0, noise_variance_law},
      {4, "Kalman oracle", 30.0, kalman_oracle},
      {5, "Stationary moments", 30.0, stationary_moments},
      {6, "Spectrum recovery ordering", 120.0, regime_ordering},
      {7, "Replicate scoring coherence", 10.0, scoring_coherence},
      {8, "CLI round-trip golden files", 60.0, cli_round_trip},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && secs < c.limit_s;
    if (!pass) ++failures;
    std::printf("%s [%d] %s: %s (%.2f s, limit %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                secs, c.limit_s);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
