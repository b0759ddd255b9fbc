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

// Degree-based sufficient statistics and their edge-level differences.
//
// Every supported statistic is a weighted degree sum
//
//   s(x) = sum_w o(deg(w; x))
//
// over some vertex side, or the edge count. Toggling edge (u, v) only moves
// the degrees of u and v, so change statistics are O(1) from degree caches.

#ifndef LERGM_STATISTICS_HPP_
#define LERGM_STATISTICS_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "lergm/graph.hpp"

namespace lergm {

using StatVector = Eigen::VectorXd;

enum class StatisticKind {
  kEdges,
  // Sum of o(degree) over all vertices of the subgraph (both sides for a
  // between-block subgraph).
  kWeightedDegree,
  // Sum of o(degree) over one side of a between-block subgraph: side 1 is
  // block k, side 2 is block l.
  kBipartiteWeightedDegree,
};

enum class Monotonicity { kIncreasing, kDecreasing, kNone };

std::string_view to_string(Monotonicity m);

class StatisticSpec {
 public:
  static StatisticSpec edges();
  static StatisticSpec weighted_degree(std::vector<double> weights,
                                       std::string name);
  static StatisticSpec bipartite_weighted_degree(int side,
                                                 std::vector<double> weights,
                                                 std::string name);

  StatisticKind kind() const { return kind_; }
  int side() const { return side_; }
  const std::vector<double>& weights() const { return weights_; }
  // Strict monotonicity of the o-table (edges count as increasing).
  Monotonicity monotonicity() const { return monotonicity_; }
  const std::string& name() const { return name_; }

  double weight(int degree) const {
    return weights_[static_cast<std::size_t>(degree)];
  }
  // o(d + 1) - o(d).
  double gap(int degree) const { return weight(degree + 1) - weight(degree); }

 private:
  StatisticSpec(StatisticKind kind, int side, std::vector<double> weights,
                std::string name);

  StatisticKind kind_;
  int side_;
  std::vector<double> weights_;
  Monotonicity monotonicity_;
  std::string name_;
};

// o(i) = exp(-alpha i), i = 0..length-1.
std::vector<double> geometric_weights(double alpha, int length);
// o(i) = 1 / (i + a)_b with the rising factorial (x)_b = x (x+1) ... (x+b-1).
std::vector<double> pochhammer_weights(int a, int b, int length);

// Parses `edges`, `gwd(alpha)`, `gwd_bipartite(side, alpha)` or `poch(a,b)`.
// Weight tables are sized max_block_size + 1, which covers every degree in
// any subgraph of a partition with that M.
StatisticSpec parse_statistic(std::string_view text, int max_block_size);

class ModelSpec {
 public:
  ModelSpec(BlockPartition partition, std::vector<StatisticSpec> within,
            std::vector<StatisticSpec> between);

  const BlockPartition& partition() const { return partition_; }
  int d_within() const { return static_cast<int>(within_.size()); }
  int d_between() const { return static_cast<int>(between_.size()); }
  std::span<const StatisticSpec> within_stats() const { return within_; }
  std::span<const StatisticSpec> between_stats() const { return between_; }
  std::span<const StatisticSpec> stats_for(const BlockPair& pair) const {
    return pair.within() ? within_stats() : between_stats();
  }

 private:
  BlockPartition partition_;
  std::vector<StatisticSpec> within_;
  std::vector<StatisticSpec> between_;
};

// beta = (beta_W, beta_B).
struct ParameterVector {
  Eigen::VectorXd within;
  Eigen::VectorXd between;

  static ParameterVector zeros(const ModelSpec& spec) {
    return {Eigen::VectorXd::Zero(spec.d_within()),
            Eigen::VectorXd::Zero(spec.d_between())};
  }
  const Eigen::VectorXd& for_pair(const BlockPair& pair) const {
    return pair.within() ? within : between;
  }
};

void check_dimensions(const ModelSpec& spec, const ParameterVector& beta);

// Subgraph-level kernels. `stats` must match the subgraph kind.
double statistic_value(const StatisticSpec& stat, const Subgraph& sg);
StatVector eval_subgraph(std::span<const StatisticSpec> stats,
                         const Subgraph& sg);
// Writes Delta_m s for label (u, v) into out[0..stats.size()).
void change_statistic_into(std::span<const StatisticSpec> stats,
                           const Subgraph& sg, int u, int v, double* out);

StatVector eval_statistic(const ModelSpec& spec, const LergmGraph& graph,
                          const BlockPair& pair);
// s(diamond^1_m x) - s(diamond^0_m x).
StatVector change_statistic(const ModelSpec& spec, const LergmGraph& graph,
                            const EdgeLabel& m);
// s(x) - s(diamond^0_m x); zero when m is absent, Delta_m s when present.
StatVector removal_difference(const ModelSpec& spec, const LergmGraph& graph,
                              const EdgeLabel& m);

// Certified bounds on ||Delta_m s|| over all graphs and labels, reported as
// (L, C) = (bound, 0) in the L * M^C growth form.
struct GrowthConstants {
  double l_within = 0.0;
  double c_within = 0.0;
  double l_between = 0.0;
  double c_between = 0.0;
};

double growth_constant(std::span<const StatisticSpec> stats,
                       const BlockPartition& partition, bool within);
GrowthConstants growth_constants(const ModelSpec& spec);

// Linear-predictor tables: for label (u, v) of a subgraph with degrees taken
// in diamond^0_m x,
//
//   <beta, Delta_m s> = constant + row[deg0(u)] + col[deg0(v)].
//
// Valid because every supported statistic's change splits over endpoints.
struct PredictorTable {
  double constant = 0.0;
  std::vector<double> row;
  std::vector<double> col;
};

PredictorTable make_predictor_table(std::span<const StatisticSpec> stats,
                                    const Eigen::VectorXd& beta,
                                    const Subgraph& sg);

}  // namespace lergm

#endif  // LERGM_STATISTICS_HPP_
