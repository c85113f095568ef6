#ifndef XAITU_HARNESS_HPP
#define XAITU_HARNESS_HPP

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xaitu/approx.hpp"
#include "xaitu/attribution.hpp"
#include "xaitu/dataset.hpp"
#include "xaitu/game.hpp"
#include "xaitu/predictor.hpp"
#include "xaitu/rules.hpp"
#include "xaitu/snapshot.hpp"

namespace xaitu::harness {

// ---------------------------------------------------------------------------
// Feature augmentation

struct AugmentSpec {
  int target_features = 0;  // n' >= n
  std::uint64_t seed = 0;
  bool standardize = true;
};

/// Keeps the original columns first (standardized if enabled), then appends
/// seeded standard-normal columns up to n'. Deterministic per seed.
Dataset augment_features(const Dataset& ds, const AugmentSpec& spec);

/// Synthetic base table of seeded standard-normal draws (column names f1..fn).
Dataset synthetic_dataset(int rows, int features, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Methods: closed-form rules plus the sampling estimators

struct MethodSpec {
  std::string name;
  std::optional<RuleId> rule;
  std::optional<approx::ApproxConfig::Method> estimator;

  static MethodSpec of(RuleId rule);
};

std::optional<MethodSpec> parse_method(std::string_view name);

/// Runs one method on a game. Estimator budgets fall back to their defaults;
/// the estimator seed is derived from `seed`.
AttributionVector run_method(const MethodSpec& method, Game& game,
                             const rules::Options& opts, std::uint64_t seed,
                             std::uint64_t budget = 0);

// ---------------------------------------------------------------------------
// Deviation from exact SHAP

struct DeviationReport {
  std::string method;
  int n = 0;
  std::size_t observations = 0;
  std::size_t excluded = 0;  // observations where the method was undefined
  double mean_abs_deviation = 0.0;    // un-normalized variant
  double normalized_deviation = 0.0;  // divided by stddev of predictions
  double prediction_stddev = 0.0;
  std::vector<double> per_feature_max;
  std::uint64_t seed = 0;
};

/// Exact SHAP is computed once per observation and shared across methods;
/// the per-observation game caches are likewise shared, so estimator queries
/// of already-seen coalitions cost no extra model calls.
class DeviationBench {
 public:
  struct Options {
    std::vector<int> observations;  // 0-based rows; empty => all
    std::optional<int> background_sample;
    std::uint64_t seed = 0;
    rules::Options rule_opts{};
  };

  DeviationBench(const Dataset& ds, const Predictor& f, Options opts);
  DeviationReport report(const MethodSpec& method);

 private:
  const Dataset& ds_;
  const Predictor& f_;
  Options opts_;
  std::vector<int> observations_;
  std::vector<std::unique_ptr<XaiGame>> games_;
  std::vector<AttributionVector> shap_;
  double prediction_stddev_ = 0.0;
};

/// Deviation over caller-supplied game oracles (used for hand games).
DeviationReport deviation_over_games(const MethodSpec& method,
                                     std::span<Game* const> games,
                                     const rules::Options& opts = {},
                                     std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Timing / cost instrumentation

struct TimingCell {
  std::string method;
  int n = 0;
  double seconds = 0.0;  // median over repeats
  std::uint64_t evals = 0;
  std::uint64_t model_calls = 0;
  bool skipped = false;
  std::string note;
};

struct TimingReport {
  std::vector<TimingCell> cells;
  std::string hardware;
};

struct TimingOptions {
  int background_rows = 200;
  int repeats = 3;
  std::uint64_t seed = 0;
  /// Fixture predictor kind: "tree" (depth-bounded cost), "mlp", "linear".
  std::string fixture = "tree";
  rules::Options rule_opts{};
};

/// Synthetic data + fixture model per grid point; exact-SHAP cells are
/// skipped (marked) beyond the enumeration guard.
TimingReport timing_bench(const std::vector<MethodSpec>& methods,
                          std::span<const int> n_grid,
                          const TimingOptions& opts);

std::string hardware_note();

// ---------------------------------------------------------------------------
// Experiment pipeline

struct ExperimentConfig {
  std::filesystem::path output_dir = "xaitu-out";
  std::vector<std::string> methods;
  std::vector<int> n_grid;           // deviation grid (augmented widths)
  std::vector<std::uint64_t> seeds;  // one deviation sweep per seed
  int observations = 16;
  int rows = 64;
  int base_features = 8;
  bool standardize = true;
  std::optional<std::filesystem::path> dataset;  // default: synthetic
  std::optional<std::filesystem::path> model;    // only if arity matches
  std::string fixture = "mlp";                   // used when model is absent
  std::uint64_t model_seed = 7;
  std::vector<int> timing_n_grid;
  int timing_repeats = 3;
  int timing_background_rows = 200;
};

ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct ExperimentResult {
  std::filesystem::path deviation_csv;
  std::filesystem::path deviation_summary_csv;
  std::filesystem::path timing_csv;
  std::filesystem::path manifest;
  std::vector<std::string> warnings;
};

/// Produces deviation CSVs, timing CSV, SVG charts and a manifest sufficient
/// to replay the run bit-identically (timings excluded). Partial failures are
/// recorded per cell; the bundle is always written.
ExperimentResult run_experiment(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Report writers

void write_attribution_csv(std::ostream& out, int observation_1based,
                           std::span<const std::string> features,
                           const AttributionVector& psi, bool header);

std::string attribution_report_json(int observation_1based,
                                    std::span<const std::string> features,
                                    const AttributionVector& psi,
                                    std::uint64_t seed,
                                    std::uint64_t budget = 0);

/// Minimal log-y line chart (one polyline per method).
void write_svg_chart(const std::filesystem::path& path,
                     const std::string& title, const std::string& x_label,
                     const std::string& y_label,
                     std::span<const std::string> series_names,
                     std::span<const std::vector<std::pair<double, double>>> series);

}  // namespace xaitu::harness

#endif
