// Microbenchmarks for the attribution rules and estimators over synthetic
// interventional games. Run: ./xaitu_benchmarks [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include <memory>

#include "xaitu/approx.hpp"
#include "xaitu/game.hpp"
#include "xaitu/harness.hpp"
#include "xaitu/rules.hpp"

using namespace xaitu;

namespace {

struct BenchSetup {
  Dataset data;
  Predictor model;
  BenchSetup(int n, int rows)
      : data(harness::synthetic_dataset(rows, n, 42)),
        model(fixtures::random_tree_ensemble(n, 43)) {}
};

void BM_EsEnscRev2(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  BenchSetup setup(n, 200);
  for (auto _ : state) {
    XaiGame game(setup.data, setup.model, 0, {});
    benchmark::DoNotOptimize(rules::es_family(RuleId::ESENSC_REV2, game));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_EsEnscRev2)->RangeMultiplier(2)->Range(8, 512)->Complexity();

void BM_ParPa(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  BenchSetup setup(n, 200);
  for (auto _ : state) {
    XaiGame game(setup.data, setup.model, 0, {});
    benchmark::DoNotOptimize(rules::pa_family(RuleId::PARPA, game));
  }
}
BENCHMARK(BM_ParPa)->RangeMultiplier(4)->Range(8, 512);

void BM_GatelyAdjusted(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  BenchSetup setup(n, 200);
  for (auto _ : state) {
    XaiGame game(setup.data, setup.model, 0, {});
    benchmark::DoNotOptimize(rules::gately_adjusted(game));
  }
}
BENCHMARK(BM_GatelyAdjusted)->RangeMultiplier(4)->Range(8, 512);

void BM_ExactShap(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  BenchSetup setup(n, 50);
  for (auto _ : state) {
    XaiGame game(setup.data, setup.model, 0, {});
    benchmark::DoNotOptimize(rules::exact_shap(game));
  }
}
BENCHMARK(BM_ExactShap)->DenseRange(8, 14, 2);

void BM_PermutationShap(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  BenchSetup setup(n, 200);
  approx::ApproxConfig cfg;
  cfg.seed = 7;
  for (auto _ : state) {
    XaiGame game(setup.data, setup.model, 0, {});
    benchmark::DoNotOptimize(approx::permutation_shap(game, cfg));
  }
}
BENCHMARK(BM_PermutationShap)->RangeMultiplier(4)->Range(8, 512);

void BM_KernelShap(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  BenchSetup setup(n, 200);
  approx::ApproxConfig cfg;
  cfg.method = approx::ApproxConfig::Method::kernel;
  cfg.seed = 7;
  for (auto _ : state) {
    XaiGame game(setup.data, setup.model, 0, {});
    benchmark::DoNotOptimize(approx::kernel_shap(game, cfg));
  }
}
BENCHMARK(BM_KernelShap)->RangeMultiplier(4)->Range(8, 128);

void BM_GameEvalSingleton(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  BenchSetup setup(n, 1000);
  XaiGame game(setup.data, setup.model, 0, {});
  game.set_caching(false);
  for (auto _ : state)
    benchmark::DoNotOptimize(game.value(Coalition::single(0)));
}
BENCHMARK(BM_GameEvalSingleton)->RangeMultiplier(4)->Range(8, 512);

}  // namespace

BENCHMARK_MAIN();
