// xaitu command-line interface: attribution, benchmarks, axiom suites and
// snapshot tooling on top of the core library.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "xaitu/approx.hpp"
#include "xaitu/errors.hpp"
#include "xaitu/harness.hpp"
#include "xaitu/rules.hpp"
#include "xaitu/snapshot.hpp"
#include "xaitu/verify.hpp"

namespace fs = std::filesystem;
using namespace xaitu;

namespace {

int g_exit_code = 0;

std::vector<harness::MethodSpec> parse_methods(const std::vector<std::string>& names) {
  std::vector<harness::MethodSpec> out;
  for (const auto& name : names) {
    auto m = harness::parse_method(name);
    if (!m) throw Error("unknown rule '" + name + "'");
    out.push_back(*m);
  }
  if (out.empty()) throw Error("no rules selected");
  return out;
}

void print_attribution_table(std::ostream& os,
                             const std::vector<std::string>& features,
                             const std::vector<AttributionVector>& results) {
  os << "rule";
  for (const auto& f : features) os << '\t' << f;
  os << "\tsum\tevals\tflags\n";
  for (const auto& psi : results) {
    os << psi.method;
    char buf[64];
    for (double v : psi.values) {
      std::snprintf(buf, sizeof buf, "%.10g", v);
      os << '\t' << buf;
    }
    std::snprintf(buf, sizeof buf, "%.10g", psi.sum());
    os << '\t' << buf << '\t' << psi.evals_used << '\t'
       << flags_to_string(psi.flags) << '\n';
  }
}

// --- attribute ------------------------------------------------------------

struct AttributeArgs {
  std::string data, model, rule = "ESENSC_REV2";
  int row = 1;
  std::optional<int> background_sample;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;
  std::string out, json_out;
  bool force = false;
};

void run_attribute(const AttributeArgs& args) {
  const Dataset ds = load_csv(args.data);
  const Predictor model = load_predictor(args.model);
  if (args.row < 1 || args.row > ds.t())
    throw DataError("--row must be in 1.." + std::to_string(ds.t()));
  auto method = harness::parse_method(args.rule);
  if (!method) throw Error("unknown rule '" + args.rule + "'");

  XaiGame::Options gopts;
  if (args.background_sample)
    gopts.background = sample_background(ds.t(), *args.background_sample, args.seed);
  XaiGame game(ds, model, args.row - 1, gopts);

  rules::Options ropts;
  ropts.force_exact = args.force;
  const AttributionVector psi =
      harness::run_method(*method, game, ropts, args.seed, args.budget);
  std::uint64_t effective_budget = 0;
  if (method->estimator) {
    effective_budget =
        args.budget != 0 ? args.budget
        : *method->estimator == approx::ApproxConfig::Method::kernel
            ? approx::default_kernel_budget(ds.n())
            : approx::default_permutation_budget(ds.n());
  }

  if (!args.out.empty()) {
    std::ofstream f(args.out);
    if (!f) throw Error("cannot write " + args.out);
    harness::write_attribution_csv(f, args.row, ds.columns, psi, true);
  } else {
    harness::write_attribution_csv(std::cout, args.row, ds.columns, psi, true);
  }
  if (!args.json_out.empty()) {
    std::ofstream f(args.json_out);
    if (!f) throw Error("cannot write " + args.json_out);
    f << harness::attribution_report_json(args.row, ds.columns, psi, args.seed,
                                          effective_budget)
      << "\n";
  }
}

// --- compare ----------------------------------------------------------------

struct CompareArgs {
  std::vector<std::string> rules = {"ESENSC_REV2", "ES",   "ENSC",
                                    "PAROP",       "PARPA", "GATELY_ADJ",
                                    "PERMUTATION_SHAP"};
  int max_n = 12;
  int step = 2;
  std::string data;
  std::string model;
  std::string fixture = "mlp";
  std::string out = "xaitu-compare";
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  int observations = 16;
  int rows = 64;
  int base_features = 8;
  std::uint64_t model_seed = 7;
};

void run_compare(const CompareArgs& args) {
  parse_methods(args.rules);  // fail fast on bad names
  harness::ExperimentConfig cfg;
  cfg.output_dir = args.out;
  cfg.methods = args.rules;
  cfg.seeds = args.seeds;
  cfg.observations = args.observations;
  cfg.rows = args.rows;
  cfg.base_features = args.base_features;
  cfg.fixture = args.fixture;
  cfg.model_seed = args.model_seed;
  if (!args.data.empty()) cfg.dataset = args.data;
  if (!args.model.empty()) cfg.model = args.model;
  const int start = cfg.dataset ? load_csv(*cfg.dataset).n() : cfg.base_features;
  if (args.max_n < start) throw Error("--max-n is below the dataset width");
  for (int n = start; n <= args.max_n; n += std::max(1, args.step))
    cfg.n_grid.push_back(n);

  const auto result = harness::run_experiment(cfg);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "deviation:         " << result.deviation_csv.string() << "\n"
            << "deviation summary: " << result.deviation_summary_csv.string()
            << "\n";
  std::ifstream summary(result.deviation_summary_csv);
  std::cout << summary.rdbuf();
}

// --- bench ------------------------------------------------------------------

struct BenchArgs {
  std::vector<int> n_grid = {8, 16, 64, 128, 256, 512};
  int repeats = 3;
  std::vector<std::string> rules = {"SHAP",       "ESENSC_REV2", "ES",
                                    "ENSC",       "PAROP",       "PARPA",
                                    "GATELY_ADJ", "PERMUTATION_SHAP",
                                    "KERNEL_SHAP"};
  int background_rows = 200;
  std::string fixture = "tree";
  std::uint64_t seed = 1;
  std::string out = "xaitu-bench";
};

void run_bench(const BenchArgs& args) {
  const auto methods = parse_methods(args.rules);
  harness::TimingOptions topts;
  topts.background_rows = args.background_rows;
  topts.repeats = args.repeats;
  topts.seed = args.seed;
  topts.fixture = args.fixture;
  const auto report = harness::timing_bench(methods, args.n_grid, topts);

  fs::create_directories(args.out);
  const fs::path csv_path = fs::path(args.out) / "timing.csv";
  std::ofstream csv(csv_path);
  csv << "method,n,seconds,evals,model_calls,skipped,note\n";
  std::map<std::string, std::vector<std::pair<double, double>>> series_map;
  std::printf("%-18s %6s %12s %10s %12s\n", "method", "n", "seconds", "evals",
              "model_calls");
  for (const auto& cell : report.cells) {
    csv << cell.method << ',' << cell.n << ',' << cell.seconds << ','
        << cell.evals << ',' << cell.model_calls << ','
        << (cell.skipped ? 1 : 0) << ',' << cell.note << '\n';
    if (cell.skipped) {
      std::printf("%-18s %6d %12s %10s %12s  (%s)\n", cell.method.c_str(),
                  cell.n, "-", "-", "-", cell.note.c_str());
    } else {
      std::printf("%-18s %6d %12.6f %10llu %12llu\n", cell.method.c_str(),
                  cell.n, cell.seconds,
                  static_cast<unsigned long long>(cell.evals),
                  static_cast<unsigned long long>(cell.model_calls));
      if (cell.seconds > 0)
        series_map[cell.method].push_back(
            {static_cast<double>(cell.n), cell.seconds});
    }
  }
  std::vector<std::string> names;
  std::vector<std::vector<std::pair<double, double>>> series;
  for (auto& [name, points] : series_map) {
    std::sort(points.begin(), points.end());
    names.push_back(name);
    series.push_back(points);
  }
  harness::write_svg_chart(fs::path(args.out) / "timing.svg",
                           "Computation time", "features", "seconds (median)",
                           names, series);
  std::cout << "hardware: " << report.hardware << "\n"
            << "wrote " << csv_path.string() << "\n";
}

// --- axioms -----------------------------------------------------------------

struct AxiomArgs {
  std::string rule = "ESENSC_REV2";
  std::string suite = "all";
  std::size_t games = 1000;
  std::uint64_t seed = 1;
  std::vector<int> ns = {2, 4, 5, 8};
  std::string witness_dir;
  std::string json_out;
};

void run_axioms(const AxiomArgs& args) {
  const auto rule = rule_from_string(args.rule);
  if (!rule) throw Error("unknown rule '" + args.rule + "'");
  std::vector<verify::AxiomId> axioms;
  if (args.suite == "all") {
    axioms.assign(verify::all_axioms().begin(), verify::all_axioms().end());
  } else {
    auto a = verify::axiom_from_string(args.suite);
    if (!a) throw Error("unknown axiom '" + args.suite + "'");
    axioms.push_back(*a);
  }
  bool all_pass = true;
  int witness_counter = 0;
  nlohmann::json verdicts = nlohmann::json::array();
  for (const auto axiom : axioms) {
    for (const int n : args.ns) {
      verify::SuiteConfig cfg;
      cfg.n = n;
      cfg.games = args.games;
      cfg.seed = args.seed ^ (static_cast<std::uint64_t>(n) << 32);
      const auto verdict = verify::check_axiom(axiom, *rule, cfg);
      const char* status = verdict.pass ? "pass" : "FAIL";
      std::printf("%-28s n=%-3d %-4s checked=%zu vacuous=%zu%s\n",
                  std::string(verify::to_string(axiom)).c_str(), n, status,
                  verdict.checked, verdict.vacuous,
                  n == 3 ? "  (informational: characterization assumes n != 3)"
                         : "");
      nlohmann::json entry{{"axiom", std::string(verify::to_string(axiom))},
                           {"rule", args.rule},
                           {"n", n},
                           {"pass", verdict.pass},
                           {"checked", verdict.checked},
                           {"vacuous", verdict.vacuous},
                           {"seed", cfg.seed},
                           {"witnesses", nlohmann::json::array()}};
      if (!verdict.pass) {
        if (n != 3) all_pass = false;
        for (const auto& w : verdict.witnesses) {
          nlohmann::json jw{{"gap", w.gap}, {"note", w.note}};
          for (int pl : w.players) jw["players"].push_back(pl + 1);
          if (!args.witness_dir.empty()) {
            fs::create_directories(args.witness_dir);
            const fs::path p =
                fs::path(args.witness_dir) /
                ("witness_" + std::string(verify::to_string(axiom)) + "_n" +
                 std::to_string(n) + "_" + std::to_string(witness_counter++) +
                 ".json");
            save_snapshot(w.game, p);
            if (w.pair_game)
              save_snapshot(*w.pair_game,
                            p.parent_path() / (p.stem().string() + "_pair.json"));
            jw["game"] = p.string();
            std::printf("  witness: %s (players:", p.string().c_str());
            for (int pl : w.players) std::printf(" %d", pl + 1);
            std::printf(" gap=%.3g)\n", w.gap);
          }
          entry["witnesses"].push_back(std::move(jw));
        }
      }
      verdicts.push_back(std::move(entry));
    }
  }
  if (!args.json_out.empty()) {
    std::ofstream f(args.json_out);
    if (!f) throw Error("cannot write " + args.json_out);
    f << verdicts.dump(2) << "\n";
  }
  if (!all_pass) g_exit_code = 3;
}

// --- game dump / replay ------------------------------------------------------

struct GameDumpArgs {
  std::string mode = "uniform";
  int n = 4;
  std::uint64_t seed = 1;
  std::string sign = "++";
  std::string out;
};

void run_game_dump(const GameDumpArgs& args) {
  if (args.mode == "rdm-pair") {
    if (args.out.empty()) throw Error("rdm-pair mode requires -o");
    const auto pair = verify::generate_rdm_pair(args.n, args.seed);
    save_snapshot(pair.v, args.out);
    const fs::path second =
        fs::path(args.out).parent_path() /
        (fs::path(args.out).stem().string() + "_pair.json");
    save_snapshot(pair.w, second);
    std::cout << "wrote " << args.out << " and " << second.string()
              << " (players " << pair.i + 1 << "," << pair.j + 1 << ")\n";
    return;
  }
  auto mode = verify::mode_from_string(args.mode);
  if (!mode) throw Error("unknown mode '" + args.mode + "'");
  verify::GameGenSpec spec;
  spec.n = args.n;
  spec.mode = *mode;
  spec.seed = args.seed;
  if (args.sign.size() == 2) {
    spec.sign_total = args.sign[0] == '-' ? -1 : +1;
    spec.sign_singletons =
        args.sign[1] == '-' ? -1 : (args.sign[1] == '0' ? 0 : +1);
  }
  const auto snap = verify::generate_game(spec);
  if (args.out.empty())
    std::cout << snapshot_to_json(snap) << "\n";
  else {
    save_snapshot(snap, args.out);
    std::cout << "wrote " << args.out << "\n";
  }
}

struct GameReplayArgs {
  std::string file;
  std::vector<std::string> rules;
  bool force = false;
};

void run_game_replay(const GameReplayArgs& args) {
  const GameSnapshot snap = load_snapshot(args.file);
  std::vector<harness::MethodSpec> methods;
  if (args.rules.empty()) {
    for (const RuleId rule : all_rules()) {
      if ((rule == RuleId::SHAP || rule == RuleId::PSI5) &&
          (snap.family != SnapshotFamily::full))
        continue;  // needs interior coalitions
      methods.push_back(harness::MethodSpec::of(rule));
    }
  } else {
    methods = parse_methods(args.rules);
  }
  rules::Options ropts;
  ropts.force_exact = args.force;
  std::vector<AttributionVector> results;
  for (const auto& method : methods) {
    SnapshotGame game(snap);
    results.push_back(harness::run_method(method, game, ropts, /*seed=*/1));
  }
  std::vector<std::string> features;
  for (int j = 0; j < snap.n; ++j) features.push_back("f" + std::to_string(j + 1));
  print_attribution_table(std::cout, features, results);
}

// --- fixture ------------------------------------------------------------------

struct FixtureArgs {
  std::string kind = "mlp";
  int n = 8;
  std::uint64_t seed = 7;
  std::string out;
  std::vector<int> hidden = {32, 16};
  int trees = 50;
  int depth = 4;
};

void run_fixture(const FixtureArgs& args) {
  Predictor model = [&] {
    if (args.kind == "linear") return fixtures::random_linear(args.n, args.seed);
    if (args.kind == "mlp")
      return fixtures::random_mlp(args.n, args.seed, args.hidden);
    if (args.kind == "tree")
      return fixtures::random_tree_ensemble(args.n, args.seed, args.trees,
                                            args.depth);
    throw Error("unknown fixture kind '" + args.kind + "'");
  }();
  if (args.out.empty())
    std::cout << predictor_to_json(model) << "\n";
  else {
    save_predictor(model, args.out);
    std::cout << "wrote " << args.out << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"xaitu: game-theoretic feature attribution for tabular models"};
  app.require_subcommand(1);

  AttributeArgs attr;
  auto* attribute = app.add_subcommand(
      "attribute", "Attribute one observation's prediction to its features");
  attribute->add_option("--data", attr.data, "dataset CSV")->required();
  attribute->add_option("--model", attr.model, "model JSON")->required();
  attribute->add_option("--rule", attr.rule,
                        "rule id or PERMUTATION_SHAP/KERNEL_SHAP");
  attribute->add_option("--row", attr.row, "observation index (1-based)")
      ->required();
  attribute->add_option("--background-sample", attr.background_sample,
                        "subsample the background to k rows");
  attribute->add_option("--seed", attr.seed, "seed for sampling");
  attribute->add_option("--budget", attr.budget,
                        "estimator evaluation budget (0 = method default)");
  attribute->add_option("-o,--out", attr.out, "write CSV here (default stdout)");
  attribute->add_option("--json", attr.json_out, "also write a JSON report");
  attribute->add_flag("--force", attr.force, "lift the exact-SHAP n<=25 guard");
  attribute->callback([&] { run_attribute(attr); });

  CompareArgs cmp;
  auto* compare = app.add_subcommand(
      "compare", "Deviation-from-exact-SHAP sweep over feature counts");
  compare->add_option("--rules", cmp.rules, "methods to compare")->delimiter(',');
  compare->add_option("--max-n", cmp.max_n, "largest feature count")->required();
  compare->add_option("--step", cmp.step, "grid step");
  compare->add_option("--data", cmp.data, "base dataset CSV (default synthetic)");
  compare->add_option("--model", cmp.model,
                      "model JSON (must match every grid width)");
  compare->add_option("--fixture", cmp.fixture,
                      "fixture kind when no model is given (mlp/tree/linear)");
  compare->add_option("--seeds", cmp.seeds, "sweep seeds")->delimiter(',');
  compare->add_option("--observations", cmp.observations, "rows to explain");
  compare->add_option("--rows", cmp.rows, "synthetic dataset rows");
  compare->add_option("--base-features", cmp.base_features,
                      "synthetic dataset base width");
  compare->add_option("--model-seed", cmp.model_seed, "fixture model seed");
  compare->add_option("--out", cmp.out, "output directory");
  compare->callback([&] { run_compare(cmp); });

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand(
      "bench", "Wall-time and eval-count scaling benchmark");
  bench_cmd->add_option("--n-grid", bench.n_grid, "feature counts")->delimiter(',');
  bench_cmd->add_option("--repeats", bench.repeats, "repeats per cell (median)");
  bench_cmd->add_option("--rules", bench.rules, "methods to time")->delimiter(',');
  bench_cmd->add_option("--background-rows", bench.background_rows,
                        "background rows per game");
  bench_cmd->add_option("--fixture", bench.fixture, "fixture kind (tree/mlp/linear)");
  bench_cmd->add_option("--seed", bench.seed, "seed");
  bench_cmd->add_option("--out", bench.out, "output directory");
  bench_cmd->callback([&] { run_bench(bench); });

  AxiomArgs ax;
  auto* axioms = app.add_subcommand("axioms", "Run executable axiom suites");
  axioms->add_option("--rule", ax.rule, "rule id")->required();
  axioms->add_option("--suite", ax.suite, "axiom name or 'all'");
  axioms->add_option("--games", ax.games, "games/pairs per suite");
  axioms->add_option("--seed", ax.seed, "seed");
  axioms->add_option("--n", ax.ns, "player counts")->delimiter(',');
  axioms->add_option("--witness-dir", ax.witness_dir,
                     "serialize failure witnesses here");
  axioms->add_option("--json", ax.json_out, "write verdicts as JSON");
  axioms->callback([&] { run_axioms(ax); });

  auto* game = app.add_subcommand("game", "Snapshot tooling");
  game->require_subcommand(1);
  GameDumpArgs dump_args;
  auto* dump = game->add_subcommand("dump", "Generate and write a game snapshot");
  dump->add_option("--mode", dump_args.mode,
                   "uniform|with-null-player|sign-stratified|"
                   "intermediate-inessential|outside-v|rdm-pair");
  dump->add_option("--n", dump_args.n, "players");
  dump->add_option("--seed", dump_args.seed, "seed");
  dump->add_option("--sign", dump_args.sign,
                   "sign pair for sign-stratified, e.g. +-, -0");
  dump->add_option("-o,--out", dump_args.out, "output file (default stdout)");
  dump->callback([&] { run_game_dump(dump_args); });

  GameReplayArgs replay_args;
  auto* replay =
      game->add_subcommand("replay", "Attribute a stored snapshot with rules");
  replay->add_option("file", replay_args.file, "snapshot JSON")->required();
  replay->add_option("--rule", replay_args.rules, "rules (default: all feasible)")
      ->delimiter(',');
  replay->add_flag("--force", replay_args.force, "lift enumeration guards");
  replay->callback([&] { run_game_replay(replay_args); });

  FixtureArgs fix;
  auto* fixture = app.add_subcommand(
      "fixture", "Generate a seeded inference-only model file");
  fixture->add_option("--kind", fix.kind, "linear|mlp|tree");
  fixture->add_option("--n", fix.n, "input features")->required();
  fixture->add_option("--seed", fix.seed, "seed");
  fixture->add_option("--hidden", fix.hidden, "mlp hidden widths")->delimiter(',');
  fixture->add_option("--trees", fix.trees, "tree count");
  fixture->add_option("--depth", fix.depth, "tree depth");
  fixture->add_option("-o,--out", fix.out, "output file (default stdout)");
  fixture->callback([&] { run_fixture(fix); });

  struct DataArgs {
    int rows = 100;
    int features = 8;
    std::uint64_t seed = 1;
    std::string out;
  } data_args;
  auto* data_cmd = app.add_subcommand(
      "data", "Generate a synthetic standard-normal dataset CSV");
  data_cmd->add_option("--rows", data_args.rows, "row count");
  data_cmd->add_option("--features", data_args.features, "feature count");
  data_cmd->add_option("--seed", data_args.seed, "seed");
  data_cmd->add_option("-o,--out", data_args.out, "output CSV")->required();
  data_cmd->callback([&] {
    save_csv(harness::synthetic_dataset(data_args.rows, data_args.features,
                                        data_args.seed),
             data_args.out);
    std::cout << "wrote " << data_args.out << "\n";
  });

  std::string experiment_config;
  auto* experiment = app.add_subcommand(
      "experiment", "Run a full experiment bundle from a JSON config");
  experiment->add_option("--config", experiment_config, "config JSON")->required();
  experiment->callback([&] {
    const auto result =
        harness::run_experiment(harness::load_experiment_config(experiment_config));
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "wrote " << result.manifest.string() << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ArityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NonFiniteError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FamilyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const GuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return g_exit_code;
}
