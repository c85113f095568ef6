#include "xaitu/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "xaitu/errors.hpp"
#include "xaitu/rng.hpp"

namespace xaitu::harness {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

}  // namespace

// ---------------------------------------------------------------------------
// Augmentation

Dataset augment_features(const Dataset& ds, const AugmentSpec& spec) {
  ds.validate();
  if (spec.target_features < ds.n())
    throw DataError("target feature count " + std::to_string(spec.target_features) +
                    " is below the dataset's " + std::to_string(ds.n()));
  Dataset out;
  out.columns = ds.columns;
  for (int j = ds.n(); j < spec.target_features; ++j)
    out.columns.push_back("syn" + std::to_string(j + 1));
  out.rows.assign(ds.rows.begin(), ds.rows.end());
  Rng base(spec.seed);
  for (int j = ds.n(); j < spec.target_features; ++j) {
    Rng col = base.fork(static_cast<std::uint64_t>(j));
    for (auto& row : out.rows) row.push_back(col.normal());
  }
  if (spec.standardize) {
    const auto mu = column_means(out);
    const auto sd = column_stddevs(out);
    for (std::size_t j = 0; j < mu.size(); ++j)
      if (sd[j] == 0.0)
        throw DataError("cannot standardize constant column " + out.columns[j]);
    for (auto& row : out.rows)
      for (std::size_t j = 0; j < row.size(); ++j)
        row[j] = (row[j] - mu[j]) / sd[j];
  }
  return out;
}

Dataset synthetic_dataset(int rows, int features, std::uint64_t seed) {
  if (rows < 1 || features < 1)
    throw DataError("synthetic dataset needs rows >= 1 and features >= 1");
  Dataset ds;
  for (int j = 0; j < features; ++j)
    ds.columns.push_back("f" + std::to_string(j + 1));
  ds.rows.assign(static_cast<std::size_t>(rows),
                 std::vector<double>(static_cast<std::size_t>(features), 0.0));
  Rng base(seed);
  for (int j = 0; j < features; ++j) {
    Rng col = base.fork(static_cast<std::uint64_t>(j));
    for (int r = 0; r < rows; ++r)
      ds.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] = col.normal();
  }
  return ds;
}

// ---------------------------------------------------------------------------
// Methods

MethodSpec MethodSpec::of(RuleId rule) {
  return MethodSpec{std::string(to_string(rule)), rule, std::nullopt};
}

std::optional<MethodSpec> parse_method(std::string_view name) {
  if (auto rule = rule_from_string(name)) return MethodSpec::of(*rule);
  if (name == "PERMUTATION_SHAP")
    return MethodSpec{"PERMUTATION_SHAP", std::nullopt,
                      approx::ApproxConfig::Method::permutation};
  if (name == "KERNEL_SHAP")
    return MethodSpec{"KERNEL_SHAP", std::nullopt,
                      approx::ApproxConfig::Method::kernel};
  return std::nullopt;
}

AttributionVector run_method(const MethodSpec& method, Game& game,
                             const rules::Options& opts, std::uint64_t seed,
                             std::uint64_t budget) {
  if (method.rule) return rules::attribute(*method.rule, game, opts);
  approx::ApproxConfig cfg;
  cfg.method = *method.estimator;
  cfg.seed = seed;
  cfg.budget = budget;
  return approx::estimate(game, cfg);
}

// ---------------------------------------------------------------------------
// Deviation

namespace {

DeviationReport accumulate_deviation(
    const MethodSpec& method, int n,
    const std::vector<AttributionVector>& shap,
    const std::vector<AttributionVector>& psi, double prediction_stddev,
    std::uint64_t seed) {
  DeviationReport report;
  report.method = method.name;
  report.n = n;
  report.seed = seed;
  report.prediction_stddev = prediction_stddev;
  report.per_feature_max.assign(static_cast<std::size_t>(n), 0.0);
  double acc = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 0; k < shap.size(); ++k) {
    if (psi[k].undefined()) {
      ++report.excluded;
      continue;
    }
    ++used;
    for (int j = 0; j < n; ++j) {
      const double d = std::abs(psi[k].values[static_cast<std::size_t>(j)] -
                                shap[k].values[static_cast<std::size_t>(j)]);
      acc += d;
      report.per_feature_max[static_cast<std::size_t>(j)] =
          std::max(report.per_feature_max[static_cast<std::size_t>(j)], d);
    }
  }
  report.observations = used;
  report.mean_abs_deviation =
      used == 0 ? 0.0 : acc / (static_cast<double>(used) * n);
  report.normalized_deviation =
      prediction_stddev > 0.0
          ? report.mean_abs_deviation / prediction_stddev
          : std::numeric_limits<double>::quiet_NaN();
  return report;
}

}  // namespace

DeviationBench::DeviationBench(const Dataset& ds, const Predictor& f, Options opts)
    : ds_(ds), f_(f), opts_(std::move(opts)) {
  if (ds.n() > rules::kExactShapMaxPlayers && !opts_.rule_opts.force_exact)
    throw GuardError("deviation benchmark needs exact SHAP; n exceeds the guard");
  observations_ = opts_.observations;
  if (observations_.empty()) {
    observations_.resize(static_cast<std::size_t>(ds.t()));
    std::iota(observations_.begin(), observations_.end(), 0);
  }
  std::vector<int> background;
  if (opts_.background_sample)
    background = sample_background(ds.t(), *opts_.background_sample, opts_.seed);

  std::optional<double> shared_empty;
  games_.reserve(observations_.size());
  shap_.reserve(observations_.size());
  std::vector<double> predictions;
  predictions.reserve(observations_.size());
  for (int obs : observations_) {
    XaiGame::Options gopts;
    gopts.background = background;
    gopts.shared_empty_value = shared_empty;
    games_.push_back(std::make_unique<XaiGame>(ds_, f_, obs, gopts));
    if (!shared_empty) shared_empty = games_.back()->empty_value();
    shap_.push_back(rules::exact_shap(*games_.back(), opts_.rule_opts));
    predictions.push_back(
        f_(ds_.rows[static_cast<std::size_t>(obs)]));
  }
  double mu = 0.0;
  for (double p : predictions) mu += p;
  mu /= static_cast<double>(predictions.size());
  double var = 0.0;
  for (double p : predictions) var += (p - mu) * (p - mu);
  prediction_stddev_ = std::sqrt(var / static_cast<double>(predictions.size()));
}

DeviationReport DeviationBench::report(const MethodSpec& method) {
  std::vector<AttributionVector> psi;
  psi.reserve(games_.size());
  for (std::size_t k = 0; k < games_.size(); ++k)
    psi.push_back(run_method(method, *games_[k], opts_.rule_opts,
                             opts_.seed * 1000003ull + k));
  return accumulate_deviation(method, ds_.n(), shap_, psi, prediction_stddev_,
                              opts_.seed);
}

DeviationReport deviation_over_games(const MethodSpec& method,
                                     std::span<Game* const> games,
                                     const rules::Options& opts,
                                     std::uint64_t seed) {
  if (games.empty()) throw Error("deviation needs at least one game");
  const int n = games.front()->num_players();
  std::vector<AttributionVector> shap, psi;
  for (std::size_t k = 0; k < games.size(); ++k) {
    shap.push_back(rules::exact_shap(*games[k], opts));
    psi.push_back(run_method(method, *games[k], opts, seed * 1000003ull + k));
  }
  return accumulate_deviation(method, n, shap, psi, 0.0, seed);
}

// ---------------------------------------------------------------------------
// Timing

std::string hardware_note() {
  std::string model = "unknown-cpu";
  std::ifstream in("/proc/cpuinfo");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) {
        model = line.substr(colon + 1);
        const auto first = model.find_first_not_of(' ');
        if (first != std::string::npos) model = model.substr(first);
      }
      break;
    }
  }
  return model + " / " + std::to_string(std::thread::hardware_concurrency()) +
         " threads";
}

namespace {

Predictor timing_fixture(const std::string& kind, int n, std::uint64_t seed) {
  if (kind == "tree") return fixtures::random_tree_ensemble(n, seed);
  if (kind == "mlp") return fixtures::random_mlp(n, seed);
  if (kind == "linear") return fixtures::random_linear(n, seed);
  throw Error("unknown fixture kind '" + kind + "'");
}

}  // namespace

TimingReport timing_bench(const std::vector<MethodSpec>& methods,
                          std::span<const int> n_grid,
                          const TimingOptions& opts) {
  TimingReport report;
  report.hardware = hardware_note();
  std::vector<int> grid(n_grid.begin(), n_grid.end());
  std::sort(grid.begin(), grid.end());
  for (int n : grid) {
    const Dataset ds =
        synthetic_dataset(opts.background_rows, n, opts.seed ^ 0x5bd1e995u ^ n);
    const Predictor f = timing_fixture(opts.fixture, n, opts.seed + n);
    for (const auto& method : methods) {
      TimingCell cell;
      cell.method = method.name;
      cell.n = n;
      const bool needs_enumeration =
          (method.rule &&
           (*method.rule == RuleId::SHAP || *method.rule == RuleId::PSI5));
      if (needs_enumeration && n > rules::kExactShapMaxPlayers &&
          !opts.rule_opts.force_exact) {
        cell.skipped = true;
        cell.note = "beyond enumeration guard";
        report.cells.push_back(std::move(cell));
        continue;
      }
      std::vector<double> times;
      for (int r = 0; r < opts.repeats; ++r) {
        XaiGame game(ds, f, 0, {});
        const auto psi = run_method(method, game, opts.rule_opts,
                                    opts.seed + static_cast<std::uint64_t>(r));
        times.push_back(psi.elapsed_seconds);
        cell.evals = psi.evals_used;
        cell.model_calls = psi.model_calls;
      }
      cell.seconds = median(std::move(times));
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Experiment pipeline

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open config file: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  if (doc.contains("output_dir"))
    cfg.output_dir = doc["output_dir"].get<std::string>();
  if (doc.contains("methods"))
    cfg.methods = doc["methods"].get<std::vector<std::string>>();
  if (doc.contains("n_grid")) cfg.n_grid = doc["n_grid"].get<std::vector<int>>();
  if (doc.contains("seeds"))
    cfg.seeds = doc["seeds"].get<std::vector<std::uint64_t>>();
  if (doc.contains("observations")) cfg.observations = doc["observations"].get<int>();
  if (doc.contains("rows")) cfg.rows = doc["rows"].get<int>();
  if (doc.contains("base_features"))
    cfg.base_features = doc["base_features"].get<int>();
  if (doc.contains("standardize")) cfg.standardize = doc["standardize"].get<bool>();
  if (doc.contains("dataset")) cfg.dataset = doc["dataset"].get<std::string>();
  if (doc.contains("model")) cfg.model = doc["model"].get<std::string>();
  if (doc.contains("fixture")) cfg.fixture = doc["fixture"].get<std::string>();
  if (doc.contains("model_seed")) cfg.model_seed = doc["model_seed"].get<std::uint64_t>();
  if (doc.contains("timing_n_grid"))
    cfg.timing_n_grid = doc["timing_n_grid"].get<std::vector<int>>();
  if (doc.contains("timing_repeats"))
    cfg.timing_repeats = doc["timing_repeats"].get<int>();
  if (doc.contains("timing_background_rows"))
    cfg.timing_background_rows = doc["timing_background_rows"].get<int>();
  return cfg;
}

namespace {

json config_to_json(const ExperimentConfig& cfg) {
  json doc;
  doc["output_dir"] = cfg.output_dir.string();
  doc["methods"] = cfg.methods;
  doc["n_grid"] = cfg.n_grid;
  doc["seeds"] = cfg.seeds;
  doc["observations"] = cfg.observations;
  doc["rows"] = cfg.rows;
  doc["base_features"] = cfg.base_features;
  doc["standardize"] = cfg.standardize;
  if (cfg.dataset) doc["dataset"] = cfg.dataset->string();
  if (cfg.model) doc["model"] = cfg.model->string();
  doc["fixture"] = cfg.fixture;
  doc["model_seed"] = cfg.model_seed;
  doc["timing_n_grid"] = cfg.timing_n_grid;
  doc["timing_repeats"] = cfg.timing_repeats;
  doc["timing_background_rows"] = cfg.timing_background_rows;
  return doc;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  if (config.methods.empty()) throw Error("no rules selected");
  std::vector<MethodSpec> methods;
  ExperimentResult result;
  for (const auto& name : config.methods) {
    if (auto m = parse_method(name))
      methods.push_back(*m);
    else
      result.warnings.push_back("unknown method '" + name + "' skipped");
  }
  if (methods.empty()) throw Error("no rules selected");
  ExperimentConfig cfg = config;
  if (cfg.seeds.empty()) cfg.seeds = {1};
  if (cfg.n_grid.empty()) cfg.n_grid = {cfg.base_features};

  fs::create_directories(cfg.output_dir);
  result.deviation_csv = cfg.output_dir / "deviation.csv";
  result.deviation_summary_csv = cfg.output_dir / "deviation_summary.csv";
  result.timing_csv = cfg.output_dir / "timing.csv";
  result.manifest = cfg.output_dir / "manifest.json";

  std::ofstream dev(result.deviation_csv);
  dev << "method,n,seed,observations,excluded,mean_abs_deviation,"
         "normalized_deviation,prediction_stddev\n";
  // medians keyed by (method, n)
  std::map<std::pair<std::string, int>, std::vector<double>> normalized_runs;
  std::map<std::pair<std::string, int>, std::vector<double>> raw_runs;

  for (const std::uint64_t seed : cfg.seeds) {
    Dataset base = cfg.dataset ? load_csv(*cfg.dataset)
                               : synthetic_dataset(cfg.rows, cfg.base_features, seed);
    for (const int n : cfg.n_grid) {
      try {
        const Dataset aug =
            augment_features(base, AugmentSpec{n, seed, cfg.standardize});
        Predictor model =
            cfg.model ? load_predictor(*cfg.model)
                      : timing_fixture(cfg.fixture, n,
                                       cfg.model_seed + static_cast<std::uint64_t>(n));
        if (model.arity() != n)
          throw ArityError("model arity " + std::to_string(model.arity()) +
                           " does not match grid point n=" + std::to_string(n));
        DeviationBench::Options bopts;
        const int obs_count = std::min(cfg.observations, aug.t());
        bopts.observations.resize(static_cast<std::size_t>(obs_count));
        std::iota(bopts.observations.begin(), bopts.observations.end(), 0);
        bopts.seed = seed;
        DeviationBench bench(aug, model, bopts);
        for (const auto& method : methods) {
          const auto report = bench.report(method);
          dev << report.method << ',' << report.n << ',' << seed << ','
              << report.observations << ',' << report.excluded << ','
              << fmt_real(report.mean_abs_deviation) << ','
              << fmt_real(report.normalized_deviation) << ','
              << fmt_real(report.prediction_stddev) << '\n';
          normalized_runs[{report.method, n}].push_back(report.normalized_deviation);
          raw_runs[{report.method, n}].push_back(report.mean_abs_deviation);
        }
      } catch (const Error& e) {
        result.warnings.push_back("deviation cell n=" + std::to_string(n) +
                                  " seed=" + std::to_string(seed) + ": " + e.what());
      }
    }
  }
  dev.close();

  std::ofstream summary(result.deviation_summary_csv);
  summary << "method,n,median_normalized_deviation,median_mean_abs_deviation\n";
  std::map<std::string, std::vector<std::pair<double, double>>> dev_series;
  for (const auto& [key, runs] : normalized_runs) {
    const double med = median(runs);
    const double med_raw = median(raw_runs[key]);
    summary << key.first << ',' << key.second << ',' << fmt_real(med) << ','
            << fmt_real(med_raw) << '\n';
    dev_series[key.first].push_back({static_cast<double>(key.second), med});
  }
  summary.close();

  {
    std::vector<std::string> names;
    std::vector<std::vector<std::pair<double, double>>> series;
    for (auto& [name, points] : dev_series) {
      std::sort(points.begin(), points.end());
      names.push_back(name);
      series.push_back(points);
    }
    write_svg_chart(cfg.output_dir / "deviation.svg", "Deviation from exact SHAP",
                    "features", "median normalized deviation", names, series);
  }

  TimingReport timing;
  if (!cfg.timing_n_grid.empty()) {
    TimingOptions topts;
    topts.background_rows = cfg.timing_background_rows;
    topts.repeats = cfg.timing_repeats;
    topts.seed = cfg.seeds.front();
    topts.fixture = cfg.fixture;
    timing = timing_bench(methods, cfg.timing_n_grid, topts);
  }
  std::ofstream tim(result.timing_csv);
  tim << "method,n,seconds,evals,model_calls,skipped,note\n";
  std::map<std::string, std::vector<std::pair<double, double>>> time_series;
  for (const auto& cell : timing.cells) {
    tim << cell.method << ',' << cell.n << ',' << fmt_real(cell.seconds) << ','
        << cell.evals << ',' << cell.model_calls << ','
        << (cell.skipped ? 1 : 0) << ',' << cell.note << '\n';
    if (!cell.skipped && cell.seconds > 0.0)
      time_series[cell.method].push_back({static_cast<double>(cell.n), cell.seconds});
  }
  tim.close();
  {
    std::vector<std::string> names;
    std::vector<std::vector<std::pair<double, double>>> series;
    for (auto& [name, points] : time_series) {
      std::sort(points.begin(), points.end());
      names.push_back(name);
      series.push_back(points);
    }
    write_svg_chart(cfg.output_dir / "timing.svg", "Computation time",
                    "features", "seconds (median)", names, series);
  }

  json manifest;
  manifest["version"] = kVersion;
  manifest["config"] = config_to_json(cfg);
  manifest["hardware"] = hardware_note();
  manifest["conventions"] = {
      {"standardization", "population (1/t) standard deviation"},
      {"deviation_normalization",
       "population stddev of predictions over the explained observations"},
      {"background", "all rows including the target unless sampled"},
      {"permutation_budget", "(2n+1)*10 characteristic-function evaluations"},
      {"kernel_budget", "min(2^n, 2n+2048) characteristic-function evaluations"}};
  manifest["outputs"] = {result.deviation_csv.filename().string(),
                         result.deviation_summary_csv.filename().string(),
                         result.timing_csv.filename().string(),
                         "deviation.svg", "timing.svg"};
  manifest["warnings"] = result.warnings;
  std::ofstream mf(result.manifest);
  mf << manifest.dump(2) << "\n";
  return result;
}

// ---------------------------------------------------------------------------
// Report writers

void write_attribution_csv(std::ostream& out, int observation_1based,
                           std::span<const std::string> features,
                           const AttributionVector& psi, bool header) {
  if (header) out << "observation,rule,feature,value,flags\n";
  const std::string flags = flags_to_string(psi.flags);
  for (std::size_t j = 0; j < psi.values.size(); ++j) {
    const std::string feature =
        j < features.size() ? features[j] : "f" + std::to_string(j + 1);
    out << observation_1based << ',' << psi.method << ',' << feature << ','
        << fmt_real(psi.values[j]) << ',' << flags << '\n';
  }
}

std::string attribution_report_json(int observation_1based,
                                    std::span<const std::string> features,
                                    const AttributionVector& psi,
                                    std::uint64_t seed, std::uint64_t budget) {
  json doc;
  doc["observation"] = observation_1based;
  doc["method"] = psi.method;
  doc["values"] = psi.values;
  doc["features"] = std::vector<std::string>(features.begin(), features.end());
  doc["flags"] = flags_to_string(psi.flags);
  if (psi.alpha) doc["alpha"] = *psi.alpha;
  doc["evals_used"] = psi.evals_used;
  doc["model_calls"] = psi.model_calls;
  doc["elapsed_seconds"] = psi.elapsed_seconds;
  doc["seed"] = seed;
  if (budget != 0) doc["budget"] = budget;
  return doc.dump(2);
}

// ---------------------------------------------------------------------------
// SVG chart

void write_svg_chart(
    const std::filesystem::path& path, const std::string& title,
    const std::string& x_label, const std::string& y_label,
    std::span<const std::string> series_names,
    std::span<const std::vector<std::pair<double, double>>> series) {
  const double width = 760, height = 460;
  const double ml = 70, mr = 180, mt = 40, mb = 50;
  static const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                   "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                   "#bcbd22", "#17becf"};
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (const auto& [x, y] : s) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      if (y > 0.0) {
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    }
  const bool have_data = xmin <= xmax && ymin <= ymax;
  if (!have_data) {
    xmin = 0;
    xmax = 1;
    ymin = 0.1;
    ymax = 1;
  }
  if (xmax == xmin) xmax = xmin + 1;
  const double ly_min = std::log10(ymin), ly_max = std::log10(ymax * 1.05);
  const double ly_span = std::max(ly_max - ly_min, 1e-9);
  auto px = [&](double x) {
    return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr);
  };
  auto py = [&](double y) {
    const double ly = std::log10(std::max(y, ymin * 1e-3));
    return height - mb - (ly - ly_min) / ly_span * (height - mt - mb);
  };

  std::ofstream out(path);
  if (!out) throw Error("cannot write chart: " + path.string());
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "' font-family='sans-serif' font-size='12'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << width / 2 << "' y='20' text-anchor='middle' font-size='15'>"
      << title << "</text>\n";
  out << "<text x='" << (ml + (width - ml - mr) / 2) << "' y='" << height - 12
      << "' text-anchor='middle'>" << x_label << "</text>\n";
  out << "<text x='16' y='" << (mt + (height - mt - mb) / 2)
      << "' text-anchor='middle' transform='rotate(-90 16 "
      << (mt + (height - mt - mb) / 2) << ")'>" << y_label << "</text>\n";
  // axes
  out << "<line x1='" << ml << "' y1='" << height - mb << "' x2='" << width - mr
      << "' y2='" << height - mb << "' stroke='black'/>\n";
  out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='"
      << height - mb << "' stroke='black'/>\n";
  // y decades
  for (int d = static_cast<int>(std::floor(ly_min));
       d <= static_cast<int>(std::ceil(ly_max)); ++d) {
    const double y = std::pow(10.0, d);
    if (y < ymin * 0.99 || y > ymax * 1.1) continue;
    out << "<line x1='" << ml - 4 << "' y1='" << py(y) << "' x2='" << width - mr
        << "' y2='" << py(y) << "' stroke='#dddddd'/>\n";
    out << "<text x='" << ml - 8 << "' y='" << py(y) + 4
        << "' text-anchor='end'>1e" << d << "</text>\n";
  }
  // x ticks at data points of the first non-empty series
  for (const auto& s : series) {
    if (s.empty()) continue;
    for (const auto& [x, y] : s) {
      (void)y;
      out << "<line x1='" << px(x) << "' y1='" << height - mb << "' x2='"
          << px(x) << "' y2='" << height - mb + 4 << "' stroke='black'/>\n";
      out << "<text x='" << px(x) << "' y='" << height - mb + 18
          << "' text-anchor='middle'>" << static_cast<long long>(x) << "</text>\n";
    }
    break;
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % 10];
    if (!series[k].empty()) {
      out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
      for (const auto& [x, y] : series[k]) out << px(x) << "," << py(y) << " ";
      out << "'/>\n";
      for (const auto& [x, y] : series[k])
        out << "<circle cx='" << px(x) << "' cy='" << py(y) << "' r='2.5' fill='"
            << color << "'/>\n";
    }
    const double legend_y = mt + 16.0 * static_cast<double>(k);
    out << "<line x1='" << width - mr + 12 << "' y1='" << legend_y << "' x2='"
        << width - mr + 34 << "' y2='" << legend_y << "' stroke='" << color
        << "' stroke-width='2'/>\n";
    out << "<text x='" << width - mr + 40 << "' y='" << legend_y + 4 << "'>"
        << (k < series_names.size() ? series_names[k] : "series") << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace xaitu::harness
