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

#include "lergm/statistics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <utility>

#include <fmt/format.h>

#include "lergm/errors.hpp"

namespace lergm {
namespace {

Monotonicity classify(const std::vector<double>& weights) {
  if (weights.size() < 2) return Monotonicity::kNone;
  bool increasing = true;
  bool decreasing = true;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    const double gap = weights[i + 1] - weights[i];
    increasing = increasing && gap > 0.0;
    decreasing = decreasing && gap < 0.0;
  }
  if (increasing) return Monotonicity::kIncreasing;
  if (decreasing) return Monotonicity::kDecreasing;
  return Monotonicity::kNone;
}

double max_abs_gap(const StatisticSpec& stat, int last_degree) {
  double best = 0.0;
  for (int i = 0; i <= last_degree; ++i) best = std::max(best, std::abs(stat.gap(i)));
  return best;
}

// Splits "name(a, b)" into name and comma-separated arguments.
std::pair<std::string, std::vector<double>> split_call(std::string_view text) {
  std::string compact;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
  }
  const auto open = compact.find('(');
  if (open == std::string::npos) return {compact, {}};
  if (compact.back() != ')') {
    throw ParseError(fmt::format("malformed statistic '{}'", text));
  }
  std::vector<double> args;
  std::istringstream list(compact.substr(open + 1, compact.size() - open - 2));
  std::string item;
  while (std::getline(list, item, ',')) {
    try {
      std::size_t used = 0;
      args.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError(fmt::format("bad argument '{}' in statistic '{}'", item, text));
    }
  }
  return {compact.substr(0, open), args};
}

int as_positive_int(double value, std::string_view what) {
  if (value < 1.0 || value != std::floor(value)) {
    throw ParseError(fmt::format("{} must be a positive integer", what));
  }
  return static_cast<int>(value);
}

}  // namespace

std::string_view to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::kIncreasing:
      return "increasing";
    case Monotonicity::kDecreasing:
      return "decreasing";
    case Monotonicity::kNone:
      break;
  }
  return "none";
}

StatisticSpec::StatisticSpec(StatisticKind kind, int side,
                             std::vector<double> weights, std::string name)
    : kind_(kind),
      side_(side),
      weights_(std::move(weights)),
      monotonicity_(kind == StatisticKind::kEdges ? Monotonicity::kIncreasing
                                                  : classify(weights_)),
      name_(std::move(name)) {
  for (double w : weights_) {
    if (!std::isfinite(w)) throw ArgumentError("weight table must be finite");
  }
}

StatisticSpec StatisticSpec::edges() {
  return StatisticSpec(StatisticKind::kEdges, 0, {}, "edges");
}

StatisticSpec StatisticSpec::weighted_degree(std::vector<double> weights,
                                             std::string name) {
  if (weights.empty()) throw ArgumentError("weight table must be non-empty");
  return StatisticSpec(StatisticKind::kWeightedDegree, 0, std::move(weights),
                       std::move(name));
}

StatisticSpec StatisticSpec::bipartite_weighted_degree(
    int side, std::vector<double> weights, std::string name) {
  if (side != 1 && side != 2) throw ArgumentError("bipartite side must be 1 or 2");
  if (weights.empty()) throw ArgumentError("weight table must be non-empty");
  return StatisticSpec(StatisticKind::kBipartiteWeightedDegree, side,
                       std::move(weights), std::move(name));
}

std::vector<double> geometric_weights(double alpha, int length) {
  if (!(alpha > 0.0)) throw ArgumentError("gwd decay alpha must be > 0");
  std::vector<double> w(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) w[static_cast<std::size_t>(i)] = std::exp(-alpha * i);
  return w;
}

std::vector<double> pochhammer_weights(int a, int b, int length) {
  if (a < 1 || b < 1) throw ArgumentError("poch(a,b) needs positive integers");
  std::vector<double> w(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) {
    double rising = 1.0;
    for (int j = 0; j < b; ++j) rising *= static_cast<double>(i + a + j);
    w[static_cast<std::size_t>(i)] = 1.0 / rising;
  }
  return w;
}

StatisticSpec parse_statistic(std::string_view text, int max_block_size) {
  const int length = max_block_size + 1;
  auto [name, args] = split_call(text);
  const std::string label(text);
  if (name == "edges" && args.empty()) return StatisticSpec::edges();
  if (name == "gwd" && args.size() == 1) {
    return StatisticSpec::weighted_degree(geometric_weights(args[0], length),
                                          fmt::format("gwd({:g})", args[0]));
  }
  if (name == "gwd_bipartite" && args.size() == 2) {
    const int side = as_positive_int(args[0], "gwd_bipartite side");
    return StatisticSpec::bipartite_weighted_degree(
        side, geometric_weights(args[1], length),
        fmt::format("gwd_bipartite({},{:g})", side, args[1]));
  }
  if (name == "poch" && args.size() == 2) {
    const int a = as_positive_int(args[0], "poch a");
    const int b = as_positive_int(args[1], "poch b");
    return StatisticSpec::weighted_degree(pochhammer_weights(a, b, length),
                                          fmt::format("poch({},{})", a, b));
  }
  throw ParseError(fmt::format("unknown statistic '{}'", label));
}

ModelSpec::ModelSpec(BlockPartition partition, std::vector<StatisticSpec> within,
                     std::vector<StatisticSpec> between)
    : partition_(std::move(partition)),
      within_(std::move(within)),
      between_(std::move(between)) {
  const auto m = static_cast<std::size_t>(partition_.max_block_size());
  const auto k = static_cast<std::size_t>(partition_.num_blocks());
  for (const auto& stat : within_) {
    if (stat.kind() == StatisticKind::kBipartiteWeightedDegree) {
      throw ArgumentError(fmt::format(
          "'{}' is a between-block statistic and cannot be used within blocks",
          stat.name()));
    }
    if (stat.kind() != StatisticKind::kEdges && stat.weights().size() < m) {
      throw ArgumentError(fmt::format("weight table of '{}' shorter than M = {}",
                                      stat.name(), m));
    }
  }
  for (const auto& stat : between_) {
    if (stat.kind() != StatisticKind::kEdges && stat.weights().size() < m + 1) {
      throw ArgumentError(fmt::format(
          "weight table of '{}' shorter than M + 1 = {}", stat.name(), m + 1));
    }
  }
  // Never more parameters than edge slots.
  if (within_.size() > k * m * (m - 1) / 2) {
    throw ArgumentError("d1 exceeds K M (M - 1) / 2");
  }
  if (between_.size() > k * (k - 1) / 2 * m * m) {
    throw ArgumentError("d2 exceeds K (K - 1) / 2 M^2");
  }
}

void check_dimensions(const ModelSpec& spec, const ParameterVector& beta) {
  if (beta.within.size() != spec.d_within() ||
      beta.between.size() != spec.d_between()) {
    throw ArgumentError(fmt::format(
        "parameter dimensions ({}, {}) do not match model ({}, {})",
        beta.within.size(), beta.between.size(), spec.d_within(),
        spec.d_between()));
  }
  if (!beta.within.allFinite() || !beta.between.allFinite()) {
    throw ArgumentError("parameters must be finite");
  }
}

double statistic_value(const StatisticSpec& stat, const Subgraph& sg) {
  auto weighted_sum = [&stat](std::span<const int> degrees) {
    double total = 0.0;
    for (int d : degrees) total += stat.weight(d);
    return total;
  };
  switch (stat.kind()) {
    case StatisticKind::kEdges:
      return static_cast<double>(sg.edge_count());
    case StatisticKind::kWeightedDegree:
      if (sg.is_within()) return weighted_sum(sg.row_degrees());
      return weighted_sum(sg.row_degrees()) + weighted_sum(sg.col_degrees());
    case StatisticKind::kBipartiteWeightedDegree:
      if (sg.is_within()) throw ArgumentError("bipartite statistic on within subgraph");
      return stat.side() == 1 ? weighted_sum(sg.row_degrees())
                              : weighted_sum(sg.col_degrees());
  }
  return 0.0;
}

StatVector eval_subgraph(std::span<const StatisticSpec> stats, const Subgraph& sg) {
  StatVector out(static_cast<Eigen::Index>(stats.size()));
  for (std::size_t j = 0; j < stats.size(); ++j) {
    out[static_cast<Eigen::Index>(j)] = statistic_value(stats[j], sg);
  }
  return out;
}

void change_statistic_into(std::span<const StatisticSpec> stats, const Subgraph& sg,
                           int u, int v, double* out) {
  const int present = sg.has(u, v) ? 1 : 0;
  const int du = sg.row_degree(u) - present;
  const int dv = sg.col_degree(v) - present;
  for (std::size_t j = 0; j < stats.size(); ++j) {
    const StatisticSpec& stat = stats[j];
    switch (stat.kind()) {
      case StatisticKind::kEdges:
        out[j] = 1.0;
        break;
      case StatisticKind::kWeightedDegree:
        out[j] = stat.gap(du) + stat.gap(dv);
        break;
      case StatisticKind::kBipartiteWeightedDegree:
        out[j] = stat.side() == 1 ? stat.gap(du) : stat.gap(dv);
        break;
    }
  }
}

StatVector eval_statistic(const ModelSpec& spec, const LergmGraph& graph,
                          const BlockPair& pair) {
  return eval_subgraph(spec.stats_for(pair), graph.subgraph(pair));
}

StatVector change_statistic(const ModelSpec& spec, const LergmGraph& graph,
                            const EdgeLabel& m) {
  graph.edge(m);  // validates the label
  const auto stats = spec.stats_for(m.pair);
  StatVector out(static_cast<Eigen::Index>(stats.size()));
  change_statistic_into(stats, graph.subgraph(m.pair), m.u, m.v, out.data());
  return out;
}

StatVector removal_difference(const ModelSpec& spec, const LergmGraph& graph,
                              const EdgeLabel& m) {
  if (!graph.edge(m)) {
    return StatVector::Zero(static_cast<Eigen::Index>(spec.stats_for(m.pair).size()));
  }
  return change_statistic(spec, graph, m);
}

double growth_constant(std::span<const StatisticSpec> stats,
                       const BlockPartition& partition, bool within) {
  const int m = partition.max_block_size();
  // Largest degree a label endpoint can have once the label is removed.
  const int last = within ? m - 2 : m - 1;
  double sum_sq = 0.0;
  for (const auto& stat : stats) {
    double bound = 0.0;
    switch (stat.kind()) {
      case StatisticKind::kEdges:
        bound = 1.0;
        break;
      case StatisticKind::kWeightedDegree:
        bound = 2.0 * max_abs_gap(stat, last);
        break;
      case StatisticKind::kBipartiteWeightedDegree:
        bound = max_abs_gap(stat, last);
        break;
    }
    sum_sq += bound * bound;
  }
  return std::sqrt(sum_sq);
}

GrowthConstants growth_constants(const ModelSpec& spec) {
  GrowthConstants out;
  out.l_within = growth_constant(spec.within_stats(), spec.partition(), true);
  out.l_between = growth_constant(spec.between_stats(), spec.partition(), false);
  return out;
}

PredictorTable make_predictor_table(std::span<const StatisticSpec> stats,
                                    const Eigen::VectorXd& beta, const Subgraph& sg) {
  PredictorTable table;
  // Degree ranges of a label endpoint after the label is removed.
  const int row_len = sg.is_within() ? std::max(sg.rows() - 1, 0) : sg.cols();
  const int col_len = sg.is_within() ? row_len : sg.rows();
  table.row.assign(static_cast<std::size_t>(row_len), 0.0);
  table.col.assign(static_cast<std::size_t>(col_len), 0.0);
  for (std::size_t j = 0; j < stats.size(); ++j) {
    const double b = beta[static_cast<Eigen::Index>(j)];
    const StatisticSpec& stat = stats[j];
    const bool to_row = stat.kind() == StatisticKind::kWeightedDegree ||
                        (stat.kind() == StatisticKind::kBipartiteWeightedDegree &&
                         stat.side() == 1);
    const bool to_col = stat.kind() == StatisticKind::kWeightedDegree ||
                        (stat.kind() == StatisticKind::kBipartiteWeightedDegree &&
                         stat.side() == 2);
    if (stat.kind() == StatisticKind::kEdges) table.constant += b;
    if (to_row) {
      for (int d = 0; d < row_len; ++d) table.row[static_cast<std::size_t>(d)] += b * stat.gap(d);
    }
    if (to_col) {
      for (int d = 0; d < col_len; ++d) table.col[static_cast<std::size_t>(d)] += b * stat.gap(d);
    }
  }
  return table;
}

}  // namespace lergm
