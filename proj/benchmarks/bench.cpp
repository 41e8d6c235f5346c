// Microbenchmarks for the hot paths: the sparse operator product, the
// encoder embedding, one full training epoch (forward + loss + backward),
// k-means, ARI, and graph sampling. Sizes mirror the synthetic experiments.
#include <benchmark/benchmark.h>

#include <utility>

#include "gnnseed/cluster_algs.hpp"
#include "gnnseed/gcn.hpp"
#include "gnnseed/gee.hpp"
#include "gnnseed/metrics.hpp"
#include "gnnseed/synth.hpp"

namespace {

using namespace gnnseed;

constexpr int kNodes = 2000;
constexpr int kCommunities = 4;

BlockModelConfig bench_config() {
  BlockModelConfig cfg;
  cfg.n = kNodes;
  cfg.k = kCommunities;
  cfg.block_probs = planted_block_probs(kCommunities, 0.3, 0.1);
  cfg.community_proportions = {1.0, 2.0, 3.0, 4.0};
  cfg.degree_correction = DegreeCorrection::Beta;
  cfg.beta_a = 1.0;
  cfg.beta_b = 4.0;
  return cfg;
}

struct Fixture {
  Graph g;
  LabelVector y;
  Mat features;

  Fixture() {
    Rng rng(42);
    DcsbmSample s = sample_dcsbm(bench_config(), rng);
    g = std::move(s.g);
    y = std::move(s.y);
    features = supervised_gee(g, y);
  }
};

const Fixture& fixture() {
  static Fixture f;
  return f;
}

void BM_ApplyOperator(benchmark::State& state) {
  const Fixture& f = fixture();
  NormalizedAdjacency s = normalized_adjacency(f.g);
  for (auto _ : state) benchmark::DoNotOptimize(apply_operator(s, f.features));
}
BENCHMARK(BM_ApplyOperator);

void BM_SupervisedGee(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(supervised_gee(f.g, f.y));
}
BENCHMARK(BM_SupervisedGee);

// One full-batch training step at experiment scale: forward pass, DMoN loss
// with its gradient, and backpropagation to both weight matrices.
void BM_DmonEpoch(benchmark::State& state) {
  const Fixture& f = fixture();
  NormalizedAdjacency s = normalized_adjacency(f.g);
  Rng rng(7);
  GcnModel model{xavier_init(kCommunities, kCommunities, rng),
                 xavier_init(kCommunities, kCommunities, rng)};
  for (auto _ : state) {
    auto [zhat, trace] = gcn_forward(s, f.features, model);
    auto [loss, grad] = dmon_loss(f.g, zhat);
    benchmark::DoNotOptimize(loss);
    benchmark::DoNotOptimize(gcn_backward(s, trace, model, grad));
  }
}
BENCHMARK(BM_DmonEpoch);

void BM_KMeans(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    Rng rng(11);
    benchmark::DoNotOptimize(kmeans(f.features, kCommunities, 5, 50, rng));
  }
}
BENCHMARK(BM_KMeans);

void BM_Ari(benchmark::State& state) {
  Rng rng(3);
  std::vector<int> a(100000), b(100000);
  for (size_t i = 0; i < a.size(); ++i) {
    a[i] = static_cast<int>(rng.uniform_int(8));
    b[i] = static_cast<int>(rng.uniform_int(8));
  }
  for (auto _ : state) benchmark::DoNotOptimize(ari(a, b));
}
BENCHMARK(BM_Ari);

void BM_SampleDcsbm(benchmark::State& state) {
  BlockModelConfig cfg = bench_config();
  for (auto _ : state) {
    Rng rng(static_cast<uint64_t>(state.iterations()));
    benchmark::DoNotOptimize(sample_dcsbm(cfg, rng));
  }
}
BENCHMARK(BM_SampleDcsbm);

}  // namespace

BENCHMARK_MAIN();
