// Copyright 2026 The lergm-stein Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cstdint>

#include <benchmark/benchmark.h>

#include "lergm/estimator.hpp"
#include "lergm/rng.hpp"
#include "lergm/sampler.hpp"
#include "lergm/statistics.hpp"

namespace lergm {
namespace {

ModelSpec edge_gwd(int blocks, int size) {
  BlockPartition partition(std::vector<int>(static_cast<std::size_t>(blocks), size));
  const int len = size + 1;
  return ModelSpec(partition,
                   {StatisticSpec::edges(),
                    StatisticSpec::weighted_degree(geometric_weights(1.0, len), "gwd")},
                   {StatisticSpec::edges(),
                    StatisticSpec::bipartite_weighted_degree(1, geometric_weights(1.0, len), "gwd1"),
                    StatisticSpec::bipartite_weighted_degree(2, geometric_weights(1.0, len),
                                                             "gwd2")});
}

ParameterVector reference_beta() {
  return {Eigen::Vector2d(1.0, -1.0), Eigen::Vector3d(1.0, -1.0, -1.0)};
}

void BM_GlauberSweep(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const ModelSpec spec = edge_gwd(4, size);
  LergmGraph graph(spec.partition());
  CounterRng rng(1);
  const ParameterVector beta = reference_beta();
  for (auto _ : state) {
    glauber_sweep(graph, spec, beta, rng);
    benchmark::DoNotOptimize(graph.edge_count());
  }
  std::size_t labels = 0;
  for (const BlockPair& p : spec.partition().all_pairs()) labels += spec.partition().num_labels(p);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(labels));
}
BENCHMARK(BM_GlauberSweep)->Arg(8)->Arg(20)->Arg(40);

void BM_ObjectiveAndGradient(benchmark::State& state) {
  const int blocks = static_cast<int>(state.range(0));
  const ModelSpec spec = edge_gwd(blocks, 20);
  SamplerConfig config;
  config.burn_in = 50;
  config.seed = 3;
  const LergmGraph graph = sample_lergm(spec, reference_beta(), config, 1).front();
  const LabelData data = collect_labels(spec, graph, Side::kBetween);
  const Eigen::VectorXd beta = reference_beta().between;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stein_objective(data, beta).value);
  }
  state.SetItemsProcessed(state.iterations() * data.delta.cols());
}
BENCHMARK(BM_ObjectiveAndGradient)->Arg(5)->Arg(20);

void BM_EstimateStein(benchmark::State& state) {
  const ModelSpec spec = edge_gwd(static_cast<int>(state.range(0)), 20);
  SamplerConfig config;
  config.burn_in = 50;
  config.seed = 4;
  const LergmGraph graph = sample_lergm(spec, reference_beta(), config, 1).front();
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_stein(spec, graph).iterations);
  }
}
BENCHMARK(BM_EstimateStein)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace lergm

BENCHMARK_MAIN();
