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

// Glauber-dynamics sampling of LERGM draws and exact enumeration of single
// subgraph distributions.

#ifndef LERGM_SAMPLER_HPP_
#define LERGM_SAMPLER_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "lergm/graph.hpp"
#include "lergm/rng.hpp"
#include "lergm/statistics.hpp"

namespace lergm {

struct SamplerConfig {
  int burn_in = 1000;  // sweeps
  int thinning = 10;   // sweeps between retained draws
  std::uint64_t seed = 0;
  // Redraw any subgraph that is completely empty or completely full.
  bool reject_degenerate = false;
  int retry_cap = 1000;

  void validate() const;
};

// Subgraph shape (within or between, with side sizes) for a block pair.
Subgraph empty_subgraph(const BlockPartition& partition, const BlockPair& pair);

// Systematic-scan Glauber dynamics on one subgraph: labels are visited in
// enumeration order and each is redrawn from its conditional law
// P(x_m = 1 | rest) = sigma(<beta, Delta_m s(x)>).
class GlauberChain {
 public:
  GlauberChain(std::span<const StatisticSpec> stats, const Eigen::VectorXd& beta,
               const Subgraph& shape);

  void sweep(Subgraph& sg, CounterRng& rng) const;

  // True when <beta, Delta_m s> does not depend on the state, so every label
  // is an independent Bernoulli and one sweep is an exact draw.
  bool state_independent() const { return state_independent_; }

 private:
  PredictorTable table_;
  bool state_independent_ = false;
};

// One sweep over every subgraph of the graph.
void glauber_sweep(LergmGraph& graph, const ModelSpec& spec,
                   const ParameterVector& beta, CounterRng& rng);

// Burn-in, then n_samples retained draws separated by `thinning` sweeps.
// Subgraphs evolve as independent chains, processed in all_pairs() order.
// Throws SamplingError if degenerate-block rejection exceeds retry_cap.
std::vector<LergmGraph> sample_lergm(const ModelSpec& spec, const ParameterVector& beta,
                                     const SamplerConfig& config, int n_samples);

// Draws from a single subgraph's law with the same burn-in/thinning protocol.
std::vector<Subgraph> sample_subgraph(std::span<const StatisticSpec> stats,
                                      const Eigen::VectorXd& beta, const Subgraph& shape,
                                      const SamplerConfig& config, int n_samples);

inline constexpr int kEnumerationCapBits = 25;

// Exact law of one subgraph: probability[mask] for every label bitmask
// (bit i = label i in enumeration order).
struct SubgraphDistribution {
  Subgraph shape;
  std::vector<double> probability;
};

SubgraphDistribution enumerate_subgraph_distribution(
    std::span<const StatisticSpec> stats, const Eigen::VectorXd& beta,
    const Subgraph& shape);

SubgraphDistribution enumerate_block_distribution(const ModelSpec& spec,
                                                  const ParameterVector& beta,
                                                  const BlockPair& pair);

using SubgraphFunctional = std::function<Eigen::VectorXd(const Subgraph&)>;

// Sum over all masks of functional(mask) * P(mask).
Eigen::VectorXd exact_expectation(const ModelSpec& spec, const ParameterVector& beta,
                                  const BlockPair& pair,
                                  const SubgraphFunctional& functional);
Eigen::VectorXd exact_expectation(const SubgraphDistribution& dist,
                                  const SubgraphFunctional& functional);

// Visits every state of `sg` in Gray-code order; fn(mask, sg) sees sg in
// that state. sg is left in an unspecified state.
template <typename Fn>
void for_each_state(Subgraph& sg, Fn&& fn) {
  const std::size_t bits = sg.num_labels();
  std::vector<std::pair<int, int>> endpoints;
  endpoints.reserve(bits);
  sg.for_each_label([&](int u, int v) { endpoints.emplace_back(u, v); });
  sg.assign_mask(0);
  const std::uint64_t count = std::uint64_t{1} << bits;
  std::uint64_t mask = 0;
  fn(mask, static_cast<const Subgraph&>(sg));
  for (std::uint64_t i = 1; i < count; ++i) {
    const int flip = __builtin_ctzll(i);
    mask ^= std::uint64_t{1} << flip;
    const auto [u, v] = endpoints[static_cast<std::size_t>(flip)];
    sg.set(u, v, ((mask >> flip) & 1u) != 0);
    fn(mask, static_cast<const Subgraph&>(sg));
  }
}

}  // namespace lergm

#endif  // LERGM_SAMPLER_HPP_
