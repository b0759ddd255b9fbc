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

#include "lergm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "lergm/errors.hpp"
#include "lergm/link.hpp"

namespace lergm {
namespace {

bool degenerate(const Subgraph& sg) {
  return sg.num_labels() > 0 && (sg.empty() || sg.full());
}

void randomize(Subgraph& sg, CounterRng& rng) {
  sg.for_each_label([&](int u, int v) { sg.set(u, v, rng.uniform() < 0.5); });
}

// Advances a subgraph chain through burn-in and collects draws.
std::vector<Subgraph> run_chain(const GlauberChain& chain, const Subgraph& shape,
                                const SamplerConfig& config, int n_samples,
                                CounterRng& rng, const std::string& where) {
  const bool exact = chain.state_independent();
  const int burn_in = exact ? 1 : config.burn_in;
  const int thinning = exact ? 1 : config.thinning;

  Subgraph state = shape;
  randomize(state, rng);
  for (int i = 0; i < burn_in; ++i) chain.sweep(state, rng);

  std::vector<Subgraph> draws;
  draws.reserve(static_cast<std::size_t>(n_samples));
  for (int s = 0; s < n_samples; ++s) {
    if (s > 0) {
      for (int i = 0; i < thinning; ++i) chain.sweep(state, rng);
    }
    if (config.reject_degenerate) {
      int retries = 0;
      while (degenerate(state)) {
        if (++retries > config.retry_cap) {
          throw SamplingError(fmt::format(
              "subgraph {} stayed empty or full after {} redraws", where,
              config.retry_cap));
        }
        for (int i = 0; i < thinning; ++i) chain.sweep(state, rng);
      }
    }
    draws.push_back(state);
  }
  return draws;
}

}  // namespace

void SamplerConfig::validate() const {
  if (burn_in < 0) throw ArgumentError("burn_in must be >= 0");
  if (thinning < 1) throw ArgumentError("thinning must be >= 1");
  if (retry_cap < 0) throw ArgumentError("retry_cap must be >= 0");
}

Subgraph empty_subgraph(const BlockPartition& partition, const BlockPair& pair) {
  partition.validate(pair);
  if (pair.within()) return Subgraph::within(partition.block_size(pair.k));
  return Subgraph::between(partition.block_size(pair.k), partition.block_size(pair.l));
}

GlauberChain::GlauberChain(std::span<const StatisticSpec> stats,
                           const Eigen::VectorXd& beta, const Subgraph& shape)
    : table_(make_predictor_table(stats, beta, shape)) {
  auto all_zero = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  };
  state_independent_ = all_zero(table_.row) && all_zero(table_.col);
}

void GlauberChain::sweep(Subgraph& sg, CounterRng& rng) const {
  const double c = table_.constant;
  const double* row = table_.row.data();
  const double* col = table_.col.data();
  sg.for_each_label([&](int u, int v) {
    const int present = sg.has(u, v) ? 1 : 0;
    const double eta = c + row[sg.row_degree(u) - present] + col[sg.col_degree(v) - present];
    sg.set(u, v, rng.uniform() < sigmoid(eta));
  });
}

void glauber_sweep(LergmGraph& graph, const ModelSpec& spec, const ParameterVector& beta,
                   CounterRng& rng) {
  check_dimensions(spec, beta);
  for (const BlockPair& pair : spec.partition().all_pairs()) {
    Subgraph& sg = graph.subgraph(pair);
    GlauberChain(spec.stats_for(pair), beta.for_pair(pair), sg).sweep(sg, rng);
  }
}

std::vector<LergmGraph> sample_lergm(const ModelSpec& spec, const ParameterVector& beta,
                                     const SamplerConfig& config, int n_samples) {
  config.validate();
  check_dimensions(spec, beta);
  if (n_samples < 1) throw ArgumentError("n_samples must be >= 1");
  const BlockPartition& partition = spec.partition();
  std::vector<LergmGraph> samples(static_cast<std::size_t>(n_samples),
                                  LergmGraph(partition));
  CounterRng rng(config.seed);
  for (const BlockPair& pair : partition.all_pairs()) {
    const Subgraph shape = empty_subgraph(partition, pair);
    const GlauberChain chain(spec.stats_for(pair), beta.for_pair(pair), shape);
    auto draws = run_chain(chain, shape, config, n_samples, rng, to_string(pair));
    for (int s = 0; s < n_samples; ++s) {
      samples[static_cast<std::size_t>(s)].subgraph(pair) =
          std::move(draws[static_cast<std::size_t>(s)]);
    }
  }
  return samples;
}

std::vector<Subgraph> sample_subgraph(std::span<const StatisticSpec> stats,
                                      const Eigen::VectorXd& beta, const Subgraph& shape,
                                      const SamplerConfig& config, int n_samples) {
  config.validate();
  if (n_samples < 1) throw ArgumentError("n_samples must be >= 1");
  if (beta.size() != static_cast<Eigen::Index>(stats.size())) {
    throw ArgumentError("parameter dimension does not match statistics");
  }
  CounterRng rng(config.seed);
  Subgraph blank = shape;
  blank.assign_mask(0);
  return run_chain(GlauberChain(stats, beta, blank), blank, config, n_samples, rng,
                   "subgraph");
}

SubgraphDistribution enumerate_subgraph_distribution(std::span<const StatisticSpec> stats,
                                                     const Eigen::VectorXd& beta,
                                                     const Subgraph& shape) {
  if (beta.size() != static_cast<Eigen::Index>(stats.size())) {
    throw ArgumentError("parameter dimension does not match statistics");
  }
  const std::size_t bits = shape.num_labels();
  if (bits > static_cast<std::size_t>(kEnumerationCapBits)) {
    throw CapacityError(fmt::format("exact enumeration over {} labels exceeds the cap of {}",
                                    bits, kEnumerationCapBits));
  }
  SubgraphDistribution dist{shape, std::vector<double>(std::size_t{1} << bits)};
  Subgraph sg = shape;
  double max_log = -std::numeric_limits<double>::infinity();
  for_each_state(sg, [&](std::uint64_t mask, const Subgraph& state) {
    const double log_weight = beta.dot(eval_subgraph(stats, state));
    dist.probability[mask] = log_weight;
    max_log = std::max(max_log, log_weight);
  });
  double total = 0.0;
  for (double& p : dist.probability) {
    p = std::exp(p - max_log);
    total += p;
  }
  for (double& p : dist.probability) p /= total;
  dist.shape.assign_mask(0);
  return dist;
}

SubgraphDistribution enumerate_block_distribution(const ModelSpec& spec,
                                                  const ParameterVector& beta,
                                                  const BlockPair& pair) {
  check_dimensions(spec, beta);
  return enumerate_subgraph_distribution(spec.stats_for(pair), beta.for_pair(pair),
                                         empty_subgraph(spec.partition(), pair));
}

Eigen::VectorXd exact_expectation(const SubgraphDistribution& dist,
                                  const SubgraphFunctional& functional) {
  Subgraph sg = dist.shape;
  Eigen::VectorXd total;
  for_each_state(sg, [&](std::uint64_t mask, const Subgraph& state) {
    Eigen::VectorXd value = functional(state);
    if (total.size() == 0) total = Eigen::VectorXd::Zero(value.size());
    total += dist.probability[mask] * value;
  });
  return total;
}

Eigen::VectorXd exact_expectation(const ModelSpec& spec, const ParameterVector& beta,
                                  const BlockPair& pair,
                                  const SubgraphFunctional& functional) {
  return exact_expectation(enumerate_block_distribution(spec, beta, pair), functional);
}

}  // namespace lergm
