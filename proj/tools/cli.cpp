#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "lsw/error.hpp"
#include "lsw/estimator.hpp"
#include "lsw/kernels.hpp"
#include "lsw/lsw_sim.hpp"

namespace lsw::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr double kDefaultSigma2 = 0.01;

struct Common {
  std::string config;
  std::uint64_t seed = 1;
  std::string out = ".";
};

struct SimulateOptions {
  std::string model = "lsw";
  int scales = 1;
  std::int64_t length = 512;
  std::vector<std::string> amplitude;
  std::vector<double> sigma2;
  std::vector<std::string> segments;
  double price_start = 0.0;  ///< when positive, also write price = p0 exp(cumsum y)
};

struct EstimateOptions {
  std::string input;
  std::string time_column = "t";
  std::vector<std::string> columns;
  std::string input_kind = "returns";
  int scales = 1;
  std::vector<double> sigma2;
  int num_replicates = 50;
  std::string score_rule = "loglik";
  double holdout_fraction = 0.2;
  std::string spline_lambda = "gcv";
  int horizon = 0;
  std::string aggregate = "best";
  std::string spectrum = "mean-square";
  double prior_scale = 1e6;
  int threads = 1;
  bool include_burn_in = false;
};

struct ScoreOptions {
  std::string a, b;
  std::string column;
  std::size_t burn_in = 0;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double parse_number(const std::string& text, const std::string& field) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError(field + ": cannot parse '" + text + "' as a number");
  return v;
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

fs::path prepare_out(const std::string& dir) {
  const fs::path out(dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) throw IoError("cannot create output directory " + out.string());
  return out;
}

std::string safe_name(const std::string& column) {
  std::string s = column;
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  return s;
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// --- simulate ---------------------------------------------------------------

AmplitudeSource parse_amplitude(const std::string& text) {
  const auto parts = split(text, ':');
  const std::string& kind = parts.front();
  const std::string field = "amplitude '" + text + "'";
  auto need = [&](std::size_t n) {
    if (parts.size() != n) throw ConfigError(field + ": expected " + std::to_string(n - 1) + " parameters");
  };
  if (kind == "const") {
    need(2);
    return ConstantAmplitude{parse_number(parts[1], field)};
  }
  if (kind == "piecewise") {
    need(3);
    PiecewiseAmplitude p;
    for (const auto& v : split(parts[1], '/')) p.values.push_back(parse_number(v, field));
    for (const auto& b : split(parts[2], '/')) p.breaks.push_back(parse_number(b, field));
    if (p.breaks.size() + 1 != p.values.size())
      throw ConfigError(field + ": piecewise needs one more value than breaks");
    return p;
  }
  if (kind == "linear") {
    need(3);
    const double a = parse_number(parts[1], field), b = parse_number(parts[2], field);
    return FunctionAmplitude{[a, b](double z) { return a + (b - a) * z; }, text};
  }
  if (kind == "rw") {
    need(2);
    return RandomWalkAmplitude{parse_number(parts[1], field)};
  }
  if (kind == "path") {
    need(3);
    const Table t = read_csv(parts[1]);
    return PathAmplitude{t.column(parts[2])};
  }
  throw ConfigError(field + ": unknown kind '" + kind + "' (const, piecewise, linear, rw, path)");
}

MaSegment parse_segment(const std::string& text) {
  const auto parts = split(text, ':');
  const std::string field = "segments '" + text + "'";
  if (parts.size() < 3) throw ConfigError(field + ": expected len:var:c0[:c1...]");
  MaSegment seg;
  const double len = parse_number(parts[0], field);
  if (len < 1 || len != std::floor(len)) throw ConfigError(field + ": length must be a positive integer");
  seg.length = static_cast<std::int64_t>(len);
  seg.variance = parse_number(parts[1], field);
  if (!(seg.variance >= 0.0)) throw ConfigError(field + ": variance must be nonnegative");
  for (std::size_t i = 2; i < parts.size(); ++i) seg.coefficients.push_back(parse_number(parts[i], field));
  return seg;
}

std::string segment_text(const MaSegment& s) {
  std::string t = std::to_string(s.length) + ":" + format_double(s.variance);
  for (double c : s.coefficients) t += ":" + format_double(c);
  return t;
}

// Price level whose log returns are y.
std::vector<double> price_path(const std::vector<double>& y, double start) {
  std::vector<double> price(y.size());
  double log_p = std::log(start);
  for (std::size_t i = 0; i < y.size(); ++i) price[i] = std::exp(log_p += y[i]);
  return price;
}

void cmd_simulate(const Common& common, const SimulateOptions& opt, std::ostream& out) {
  json config;
  config["model"] = opt.model;
  json manifest;
  manifest["command"] = "simulate";
  std::vector<std::string> files;

  if (opt.model == "lsw") {
    if (opt.scales < 1 || opt.scales > kDefaultMaxScale)
      throw ConfigError("scales: must lie in 1.." + std::to_string(kDefaultMaxScale));
    const auto J = static_cast<std::size_t>(opt.scales);
    std::vector<std::string> amp = opt.amplitude.empty() ? std::vector<std::string>{"const:1"} : opt.amplitude;
    if (amp.size() == 1 && J > 1) amp.assign(J, amp.front());
    if (amp.size() != J)
      throw ConfigError("amplitude: expected " + std::to_string(J) + " entries, got " + std::to_string(amp.size()));
    std::vector<double> sigma2 = opt.sigma2.empty() ? std::vector<double>(J, 0.0) : opt.sigma2;
    if (sigma2.size() == 1 && J > 1) sigma2.assign(J, sigma2.front());
    if (sigma2.size() != J)
      throw ConfigError("sigma2: expected " + std::to_string(J) + " entries, got " + std::to_string(sigma2.size()));
    for (double s : sigma2)
      if (!(s >= 0.0)) throw ConfigError("sigma2: entries must be nonnegative");

    AmplitudeSpec spec;
    for (const auto& a : amp) spec.scales.push_back(parse_amplitude(a));
    spec.sigma2 = sigma2;
    const LswRealization r = simulate_lsw(spec, opt.length, common.seed);

    std::vector<std::string> header = {"t", "y"};
    std::vector<std::vector<double>> cols;
    std::vector<double> t(static_cast<std::size_t>(r.length));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i);
    cols.push_back(t);
    cols.push_back(r.y);
    for (std::size_t j = 0; j < J; ++j) {
      header.push_back("x_" + std::to_string(j + 1));
      cols.push_back(r.x[j]);
    }
    for (std::size_t j = 0; j < J; ++j) {
      header.push_back("w_" + std::to_string(j + 1));
      cols.push_back(r.w[j]);
    }
    for (std::size_t j = 0; j < J; ++j) {
      header.push_back("S_" + std::to_string(j + 1));
      std::vector<double> s(r.w[j].size());
      for (std::size_t i = 0; i < s.size(); ++i) s[i] = r.w[j][i] * r.w[j][i];
      cols.push_back(std::move(s));
    }
    if (opt.price_start > 0.0) {
      header.push_back("price");
      cols.push_back(price_path(r.y, opt.price_start));
    }
    const fs::path dir = prepare_out(common.out);
    write_csv(dir / "realization.csv", header, cols);
    files.push_back("realization.csv");
    config["scales"] = opt.scales;
    config["length"] = opt.length;
    config["amplitude"] = amp;
    config["sigma2"] = sigma2;
  } else if (opt.model == "concat-ma") {
    MaSegmentSpec spec;
    if (opt.segments.empty()) {
      spec = default_concat_ma_spec();
    } else {
      for (const auto& s : opt.segments) spec.segments.push_back(parse_segment(s));
    }
    const ConcatMaSeries series = simulate_concat_ma(spec, common.seed);
    std::vector<double> t(series.y.size()), seg(series.y.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      t[i] = static_cast<double>(i);
      seg[i] = series.segment[i] + 1;
    }
    const fs::path dir = prepare_out(common.out);
    std::vector<std::string> header = {"t", "y", "segment"};
    std::vector<std::vector<double>> cols = {t, series.y, seg};
    if (opt.price_start > 0.0) {
      header.push_back("price");
      cols.push_back(price_path(series.y, opt.price_start));
    }
    write_csv(dir / "realization.csv", header, cols);
    files.push_back("realization.csv");
    json segs = json::array();
    for (const auto& s : spec.segments) segs.push_back(segment_text(s));
    config["segments"] = segs;
    config["length"] = spec.total_length();
  } else {
    throw ConfigError("model: expected lsw or concat-ma, got '" + opt.model + "'");
  }

  if (opt.price_start > 0.0) config["price_start"] = opt.price_start;
  config["seed"] = common.seed;
  manifest["config"] = config;
  manifest["seed"] = common.seed;
  manifest["files"] = files;
  manifest["kernels"] = kernels::isa_name(kernels::active_isa());
  manifest["created"] = timestamp();
  write_json(prepare_out(common.out) / "manifest.json", manifest);
  out << "wrote " << (fs::path(common.out) / "realization.csv").string() << "\n";
}

// --- estimate ---------------------------------------------------------------

EstimationConfig estimation_config(const Common& common, const EstimateOptions& opt) {
  EstimationConfig cfg;
  cfg.num_scales = opt.scales;
  if (opt.scales < 1) throw ConfigError("scales: must be at least 1");
  const auto J = static_cast<std::size_t>(opt.scales);
  cfg.sigma2 = opt.sigma2.empty() ? std::vector<double>(J, kDefaultSigma2) : opt.sigma2;
  if (cfg.sigma2.size() == 1 && J > 1) cfg.sigma2.assign(J, cfg.sigma2.front());
  cfg.num_replicates = opt.num_replicates;
  cfg.seed = common.seed;
  cfg.horizon = opt.horizon;
  cfg.score_rule = parse_score_rule(opt.score_rule);
  cfg.holdout_fraction = opt.holdout_fraction;
  if (opt.spline_lambda == "gcv") {
    cfg.spline = SplineLambda::gcv();
  } else {
    cfg.spline = SplineLambda::fixed(parse_number(opt.spline_lambda, "spline-lambda"));
  }
  cfg.aggregation = parse_aggregation(opt.aggregate);
  cfg.functional = parse_spectrum_functional(opt.spectrum);
  cfg.prior_scale = opt.prior_scale;
  cfg.threads = opt.threads;
  cfg.exclude_burn_in = !opt.include_burn_in;
  if (opt.input_kind != "prices" && opt.input_kind != "returns")
    throw ConfigError("input-kind: expected prices or returns, got '" + opt.input_kind + "'");
  cfg.validate();
  return cfg;
}

json config_echo(const EstimationConfig& cfg, const EstimateOptions& opt, const std::vector<std::string>& columns) {
  json c;
  c["input"] = opt.input;
  c["input_kind"] = opt.input_kind;
  c["time_column"] = opt.time_column;
  c["columns"] = columns;
  c["scales"] = cfg.num_scales;
  c["sigma2"] = cfg.sigma2;
  c["num_replicates"] = cfg.num_replicates;
  c["seed"] = cfg.seed;
  c["score_rule"] = to_string(cfg.score_rule);
  c["holdout_fraction"] = cfg.holdout_fraction;
  c["spline_lambda"] = cfg.spline.use_gcv ? json("gcv") : json(cfg.spline.value);
  c["horizon"] = cfg.horizon;
  c["aggregate"] = to_string(cfg.aggregation);
  c["spectrum"] = to_string(cfg.functional);
  c["prior_scale"] = cfg.prior_scale;
  c["exclude_burn_in"] = cfg.exclude_burn_in;
  c["threads"] = cfg.threads;
  return c;
}

void cmd_estimate(const Common& common, const EstimateOptions& opt, std::ostream& out) {
  if (opt.input.empty()) throw ConfigError("input: an input CSV path is required");
  const EstimationConfig cfg = estimation_config(common, opt);
  const Table table = read_csv(opt.input);

  std::vector<std::string> columns = opt.columns;
  if (columns.empty()) {
    if (table.find("y") >= 0) {
      columns = {"y"};
    } else {
      for (const auto& h : table.header)
        if (h != opt.time_column) {
          columns = {h};
          break;
        }
    }
  }
  if (columns.empty()) throw ConfigError("columns: " + opt.input + " has no value column");
  for (const auto& c : columns) {
    if (table.find(c) < 0) throw ConfigError("columns: no column '" + c + "' in " + opt.input);
    if (c == opt.time_column) throw ConfigError("columns: '" + c + "' is the time column");
  }

  const fs::path dir = prepare_out(common.out);
  const json echo = config_echo(cfg, opt, columns);
  json manifest;
  manifest["command"] = "estimate";
  manifest["config"] = echo;
  manifest["seed"] = cfg.seed;
  json per_column = json::object();
  std::vector<std::string> files;

  for (const auto& name : columns) {
    std::vector<double> y = table.column(name);
    if (opt.input_kind == "prices") {
      try {
        y = log_returns(y);
      } catch (const DataError& e) {
        throw DataError(opt.input + ", column '" + name + "': " + e.what());
      }
    }
    const SpectrumEstimate est = estimate_spectrum(y, cfg);
    const std::string tag = safe_name(name);

    {
      std::vector<double> scale, t, wm, wv, sr, ss;
      for (const auto& sc : est.scales)
        for (std::size_t i = 0; i < sc.t.size(); ++i) {
          scale.push_back(sc.scale);
          t.push_back(static_cast<double>(sc.t[i]));
          wm.push_back(sc.w_mean[i]);
          wv.push_back(sc.w_var[i]);
          sr.push_back(sc.s_raw[i]);
          ss.push_back(sc.s_smoothed[i]);
        }
      write_csv(dir / ("spectrum_" + tag + ".csv"), {"scale", "t", "w_mean", "w_var", "S_raw", "S_smoothed"},
                {scale, t, wm, wv, sr, ss});
    }
    {
      std::vector<double> id, ll, ms, bf;
      for (const auto& r : est.replicates) {
        id.push_back(r.id);
        ll.push_back(r.valid ? r.loglik : std::nan(""));
        ms.push_back(r.msfe);
        bf.push_back(r.log_bf_vs_selected);
      }
      write_csv(dir / ("scores_" + tag + ".csv"), {"replicate", "loglik", "msfe", "log_bf_vs_selected"},
                {id, ll, ms, bf});
    }
    {
      std::vector<double> t(est.stream_t.begin(), est.stream_t.end());
      write_csv(dir / ("stream_" + tag + ".csv"), {"t", "y", "pred_mean", "pred_var", "loglik"},
                {t, est.observed, est.pred_mean, est.pred_var, est.loglik_stream});
    }
    json col_files = {{"spectrum", "spectrum_" + tag + ".csv"},
                      {"scores", "scores_" + tag + ".csv"},
                      {"stream", "stream_" + tag + ".csv"}};
    if (!est.forecasts.empty()) {
      std::vector<double> t, m, v;
      for (const auto& f : est.forecasts) {
        t.push_back(static_cast<double>(f.t));
        m.push_back(f.mean);
        v.push_back(f.var);
      }
      write_csv(dir / ("forecast_" + tag + ".csv"), {"t", "mean", "var"}, {t, m, v});
      col_files["forecast"] = "forecast_" + tag + ".csv";
    }

    json doc;
    doc["column"] = name;
    doc["length"] = est.length;
    doc["start_time"] = est.start_time;
    doc["burn_in"] = est.window.burn_in;
    doc["holdout"] = est.window.holdout;
    doc["selected"] = est.selected;
    json scores = json::array();
    for (const auto& r : est.replicates)
      scores.push_back({{"replicate", r.id},
                        {"valid", r.valid},
                        {"loglik", number(r.loglik)},
                        {"msfe", number(r.msfe)},
                        {"score", number(r.score)},
                        {"log_bf_vs_selected", number(r.log_bf_vs_selected)}});
    doc["scores"] = scores;

    // Truth columns from a simulate run line up with the series index.
    bool has_truth = opt.input_kind == "returns";
    for (int j = 1; j <= cfg.num_scales && has_truth; ++j) has_truth = table.find("S_" + std::to_string(j)) >= 0;
    if (has_truth) {
      json mae;
      for (const auto& sc : est.scales) {
        const auto& truth = table.column("S_" + std::to_string(sc.scale));
        double acc = 0.0;
        std::size_t n = 0;
        for (std::size_t i = 0; i < sc.t.size(); ++i) {
          if (sc.t[i] < 0 || static_cast<std::size_t>(sc.t[i]) >= truth.size()) continue;
          acc += std::abs(sc.s_smoothed[i] - truth[static_cast<std::size_t>(sc.t[i])]);
          ++n;
        }
        mae[std::to_string(sc.scale)] = n ? acc / static_cast<double>(n) : 0.0;
      }
      doc["truth_mae"] = mae;
    }
    doc["config"] = echo;
    doc["files"] = col_files;
    write_json(dir / ("estimate_" + tag + ".json"), doc);
    col_files["estimate"] = "estimate_" + tag + ".json";
    col_files["burn_in"] = est.window.burn_in;
    for (const auto& [k, v] : col_files.items())
      if (v.is_string()) files.push_back(v.get<std::string>());
    per_column[name] = col_files;
    out << name << ": selected replicate " << est.selected << " of " << est.replicates.size() << "\n";
  }

  manifest["columns"] = per_column;
  manifest["files"] = files;
  manifest["kernels"] = kernels::isa_name(kernels::active_isa());
  manifest["created"] = timestamp();
  write_json(dir / "manifest.json", manifest);
}

// --- score ------------------------------------------------------------------

struct Stream {
  std::string label;
  std::vector<double> t, loglik, pred_mean, y;
};

Stream load_stream(const std::string& path, const std::string& column) {
  fs::path file(path);
  if (file.extension() == ".json") {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open manifest " + file.string());
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw DataError(file.string() + ": invalid JSON: " + e.what());
    }
    if (!doc.contains("columns") || !doc["columns"].is_object() || doc["columns"].empty())
      throw DataError(file.string() + ": manifest lists no estimate columns");
    const auto& cols = doc["columns"];
    const json* entry = nullptr;
    if (column.empty()) {
      entry = &cols.begin().value();
    } else if (cols.contains(column)) {
      entry = &cols[column];
    } else {
      throw ConfigError("column: manifest " + file.string() + " has no column '" + column + "'");
    }
    file = file.parent_path() / entry->at("stream").get<std::string>();
  }
  const Table t = read_csv(file);
  Stream s;
  s.label = file.string();
  s.t = t.column("t");
  s.loglik = t.column("loglik");
  if (t.find("pred_mean") >= 0 && t.find("y") >= 0) {
    s.pred_mean = t.column("pred_mean");
    s.y = t.column("y");
  }
  return s;
}

void cmd_score(const Common& common, const ScoreOptions& opt, std::ostream& out) {
  if (opt.a.empty() || opt.b.empty()) throw ConfigError("a/b: two stream files or manifests are required");
  const Stream a = load_stream(opt.a, opt.column);
  const Stream b = load_stream(opt.b, opt.column);
  if (a.t != b.t) {
    const auto range = [](const Stream& s) {
      return s.t.empty() ? std::string("empty")
                         : format_double(s.t.front()) + ".." + format_double(s.t.back()) + " (" +
                               std::to_string(s.t.size()) + " steps)";
    };
    throw ConfigError("misaligned time ranges: " + range(a) + " vs " + range(b));
  }
  if (opt.burn_in >= a.t.size()) throw ConfigError("burn-in: leaves no steps to score");
  const std::size_t from = opt.burn_in;
  const auto sub = [from](const std::vector<double>& v) { return std::span(v).subspan(from); };

  const auto bf = sequential_bayes_factor(sub(a.loglik), sub(b.loglik));
  const fs::path dir = prepare_out(common.out);
  write_csv(dir / "bayes_factor.csv", {"t", "log_bf"}, {std::vector<double>(a.t.begin() + from, a.t.end()), bf});

  std::string table = "stream,steps,msfe\n";
  const auto row = [&](const char* name, const Stream& s) {
    const double m = s.y.empty() ? std::nan("") : msfe(sub(s.pred_mean), sub(s.y));
    table += std::string(name) + "," + std::to_string(s.t.size() - from) + "," + format_double(m) + "\n";
  };
  row("a", a);
  row("b", b);
  write_text(dir / "msfe.csv", table);

  json manifest;
  manifest["command"] = "score";
  manifest["config"] = {{"a", opt.a}, {"b", opt.b}, {"column", opt.column}, {"burn_in", opt.burn_in}};
  manifest["final_log_bf"] = number(bf.back());
  manifest["files"] = {"bayes_factor.csv", "msfe.csv"};
  manifest["created"] = timestamp();
  write_json(dir / "manifest.json", manifest);
  out << "final log Bayes factor (a vs b): " << format_double(bf.back()) << "\n";
}

// --- argument plumbing ------------------------------------------------------

void add_common(CLI::App* sub, Common& common) {
  sub->add_option("--config", common.config, "TOML key = value file; flags override its entries");
  sub->add_option("--seed", common.seed, "Random seed");
  sub->add_option("--out", common.out, "Output directory");
}

bool given(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args)
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  return false;
}

// Entries of the --config file become flags unless given on the command line.
std::vector<std::string> with_config(CLI::App* sub, std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  if (!fs::exists(path)) throw IoError("cannot open config file " + path);
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_file(path);
  } catch (const CLI::Error& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  std::vector<std::string> extra;
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    if (!item.parents.empty() && item.parents.front() != sub->get_name()) continue;
    const std::string flag = "--" + item.name;
    CLI::Option* option = sub->get_option_no_throw(flag);
    if (option == nullptr || item.name == "config")
      throw ConfigError("config " + path + ": unknown key '" + item.name + "'");
    if (given(args, flag)) continue;
    if (option->get_expected_max() == 0) {
      if (!item.inputs.empty() && item.inputs.front() == "true") extra.push_back(flag);
      continue;
    }
    std::string value;
    for (std::size_t i = 0; i < item.inputs.size(); ++i) value += (i ? "," : "") + item.inputs[i];
    extra.push_back(flag);
    extra.push_back(value);
  }
  args.insert(args.begin() + 1, extra.begin(), extra.end());
  return args;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Locally stationary wavelet spectrum estimation", "lsw-spectrum");
  app.require_subcommand(1);
  Common common;
  SimulateOptions sim;
  EstimateOptions est;
  ScoreOptions score;

  CLI::App* simulate = app.add_subcommand("simulate", "Simulate an LSW or concatenated-MA series");
  add_common(simulate, common);
  simulate->add_option("--model", sim.model, "lsw or concat-ma");
  simulate->add_option("--scales", sim.scales, "Number of scales J");
  simulate->add_option("--length", sim.length, "Series length T");
  simulate->add_option("--amplitude", sim.amplitude,
                       "Per-scale amplitude: const:V, piecewise:V1/V2:B1, linear:A:B, rw:W0, path:FILE:COL")
      ->delimiter(',');
  simulate->add_option("--sigma2", sim.sigma2, "Per-scale evolution variance")->delimiter(',');
  simulate->add_option("--segments", sim.segments, "concat-ma segments LEN:VAR:C0[:C1...]")->delimiter(',');
  simulate->add_option("--price-start", sim.price_start, "Also write a price column starting from this level");

  CLI::App* estimate = app.add_subcommand("estimate", "Estimate the wavelet spectrum of CSV columns");
  add_common(estimate, common);
  estimate->add_option("--input", est.input, "Input CSV");
  estimate->add_option("--time-column", est.time_column, "Time column name (optional in the file)");
  estimate->add_option("--columns", est.columns, "Value columns to estimate")->delimiter(',');
  estimate->add_option("--input-kind", est.input_kind, "prices or returns");
  estimate->add_option("--scales", est.scales, "Number of scales J");
  estimate->add_option("--sigma2", est.sigma2, "Per-scale random-walk variance")->delimiter(',');
  estimate->add_option("--num-replicates", est.num_replicates, "Simulated replicates M");
  estimate->add_option("--score-rule", est.score_rule, "loglik or msfe");
  estimate->add_option("--holdout-fraction", est.holdout_fraction, "Trailing share scored under msfe");
  estimate->add_option("--spline-lambda", est.spline_lambda, "Spline smoothing parameter or gcv");
  estimate->add_option("--horizon", est.horizon, "Forecast horizon");
  estimate->add_option("--aggregate", est.aggregate, "best or weighted");
  estimate->add_option("--spectrum", est.spectrum, "mean-square or square-of-mean");
  estimate->add_option("--prior-scale", est.prior_scale, "Prior variance multiplier of var(y)");
  estimate->add_option("--threads", est.threads, "Worker threads for replicates");
  estimate->add_flag("--include-burn-in", est.include_burn_in, "Score the first 2^J steps too");

  CLI::App* scorer = app.add_subcommand("score", "Compare two likelihood streams");
  add_common(scorer, common);
  scorer->add_option("--a", score.a, "Stream CSV or estimate manifest");
  scorer->add_option("--b", score.b, "Stream CSV or estimate manifest");
  scorer->add_option("--column", score.column, "Column to read from manifests");
  scorer->add_option("--burn-in", score.burn_in, "Leading steps to skip");

  try {
    std::vector<std::string> argv = args;
    if (!argv.empty()) {
      for (CLI::App* sub : {simulate, estimate, scorer})
        if (argv.front() == sub->get_name()) argv = with_config(sub, argv);
    }
    std::reverse(argv.begin(), argv.end());
    try {
      app.parse(argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
      throw ConfigError(e.what());
    }
    if (simulate->parsed()) cmd_simulate(common, sim, out);
    if (estimate->parsed()) cmd_estimate(common, est, out);
    if (scorer->parsed()) cmd_score(common, score, out);
    return 0;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace lsw::cli
