// Serial reference kernels against their OpenMP counterparts on a synthetic
// 2000 x 2000 workload. Run with --benchmark_filter to pick a kernel and
// OMP_NUM_THREADS to set the parallel width.

#include <benchmark/benchmark.h>

#include "psirec/experiment.hpp"
#include "psirec/graph.hpp"
#include "psirec/synthetic.hpp"

using namespace psirec;

namespace {

struct Workload {
  Dataset ds;
  BipartiteGraph graph;
  WalkCorpus corpus;
  ConfidenceMatrix target;
  FactorModel model;

  Workload() {
    SyntheticConfig s;
    s.users = 2000;
    s.items = 2000;
    s.communities = 20;
    s.mean_interactions = 8;
    ds = split(generate_synthetic(s), SplitRatios{}, 1);
    graph = build_graph(ds.train, ds.num_users(), ds.num_items());
    corpus = generate_walks(graph, WalkConfig{10, 80, 1});
    target = sppmi_matrix(sample_pairs(corpus, 3, ds.num_users(), ds.num_items()), 1.0);
    AlsConfig cfg;
    cfg.sweeps = 2;
    model = als_fit(target, cfg);
  }
};

const Workload& workload() {
  static const Workload w;
  return w;
}

void BM_WalksSerial(benchmark::State& state) {
  const auto& w = workload();
  for (auto _ : state) benchmark::DoNotOptimize(generate_walks_serial(w.graph, WalkConfig{10, 80, 1}));
}

void BM_WalksParallel(benchmark::State& state) {
  const auto& w = workload();
  for (auto _ : state) benchmark::DoNotOptimize(generate_walks(w.graph, WalkConfig{10, 80, 1}));
}

void BM_PairsSerial(benchmark::State& state) {
  const auto& w = workload();
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_pairs_serial(w.corpus, 3, w.ds.num_users(), w.ds.num_items()));
}

void BM_PairsParallel(benchmark::State& state) {
  const auto& w = workload();
  for (auto _ : state) benchmark::DoNotOptimize(sample_pairs(w.corpus, 3, w.ds.num_users(), w.ds.num_items()));
}

void BM_HalfSweepSerial(benchmark::State& state) {
  const auto& w = workload();
  const auto rows = w.target.by_user();
  Matrix out(w.model.user_factors.rows(), w.model.user_factors.cols());
  for (auto _ : state) {
    solve_half_sweep_serial(rows, w.model.item_factors, 0.25, out);
    benchmark::ClobberMemory();
  }
}

void BM_HalfSweepParallel(benchmark::State& state) {
  const auto& w = workload();
  const auto rows = w.target.by_user();
  Matrix out(w.model.user_factors.rows(), w.model.user_factors.cols());
  for (auto _ : state) {
    solve_half_sweep(rows, w.model.item_factors, 0.25, out);
    benchmark::ClobberMemory();
  }
}

void BM_RecommendSerial(benchmark::State& state) {
  const auto& w = workload();
  for (auto _ : state)
    benchmark::DoNotOptimize(recommend_all_serial(factor_scorer(w.model), w.ds.num_users(), w.ds.num_items(),
                                                  w.ds.train, 10, true));
}

void BM_RecommendParallel(benchmark::State& state) {
  const auto& w = workload();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        recommend_all(factor_scorer(w.model), w.ds.num_users(), w.ds.num_items(), w.ds.train, 10, true));
}

}  // namespace

BENCHMARK(BM_WalksSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WalksParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PairsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairsParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_HalfSweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HalfSweepParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RecommendSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RecommendParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
