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

#include "lergm/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "lergm/errors.hpp"
#include "lergm/optimizer.hpp"

namespace lergm {
namespace {

std::vector<BlockPair> pairs_on(const BlockPartition& partition, Side side) {
  std::vector<BlockPair> out;
  for (const BlockPair& pair : partition.all_pairs()) {
    if (pair.within() == (side == Side::kWithin)) out.push_back(pair);
  }
  return out;
}

void append_subgraph(std::span<const StatisticSpec> stats, const Subgraph& sg,
                     LabelData& data, Eigen::Index& column) {
  data.subgraph_begin.push_back(column);
  sg.for_each_label([&](int u, int v) {
    double* out = data.delta.col(column).data();
    change_statistic_into(stats, sg, u, v, out);
    const bool present = sg.has(u, v);
    data.present[static_cast<std::size_t>(column)] = present ? 1 : 0;
    if (present) data.removal_total += data.delta.col(column);
    ++column;
  });
}

LabelData allocate(int dim, std::size_t labels) {
  LabelData data;
  data.delta.resize(dim, static_cast<Eigen::Index>(labels));
  data.removal_total = Eigen::VectorXd::Zero(dim);
  data.present.assign(labels, 0);
  return data;
}

// Slope of G at infinity along `direction`:
//   sum_{x_m = 0} max(a_m, 0) + sum_{x_m = 1} max(-a_m, 0),  a_m = <d, Delta_m s>.
// Zero means the objective never increases along the ray, so no finite
// minimizer lies in that direction.
bool separable_along(const LabelData& data, const Eigen::VectorXd& direction) {
  if (direction.size() == 0 || data.num_labels() == 0) return false;
  const Eigen::VectorXd a = data.delta.transpose() * direction;
  double slope = 0.0;
  double scale = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    slope += data.present[static_cast<std::size_t>(j)] ? std::max(-a[j], 0.0)
                                                       : std::max(a[j], 0.0);
    scale += data.delta.col(j).norm();
  }
  return slope <= 1e-12 * scale;
}

struct SideSolution {
  Eigen::VectorXd estimate;
  BfgsResult bfgs;
  double objective = 0.0;
  double hessian_min_eig = 0.0;
  bool converged = false;
};

using SideObjective = std::function<ObjectiveValue(const LabelData&, const Eigen::VectorXd&)>;

SideSolution solve_side(const LabelData& data, const SideObjective& objective,
                        const Eigen::VectorXd& init, double radius,
                        const EstimatorConfig& config, std::string label) {
  BfgsOptions options;
  options.grad_tol = config.grad_tol;
  options.max_iters = config.max_iters;
  options.armijo_c1 = config.armijo_c1;
  options.backtrack = config.backtrack;
  options.radius = radius;
  options.label = std::move(label);

  const ObjectiveFn fn = [&](const Eigen::VectorXd& beta, Eigen::VectorXd* grad) {
    ObjectiveValue v = objective(data, beta);
    *grad = std::move(v.gradient);
    return v.value;
  };
  SideSolution out;
  out.bfgs = minimize_bfgs(fn, init, options);
  out.estimate = out.bfgs.x;
  out.objective = out.bfgs.value;
  out.hessian_min_eig = min_eigenvalue(stein_hessian(data, out.estimate));
  out.converged = out.bfgs.converged;
  if (out.converged && !out.bfgs.on_boundary && out.estimate.norm() > 0.0 &&
      separable_along(data, out.estimate.normalized())) {
    out.converged = false;
  }
  return out;
}

Eigen::VectorXd initial_point(const Eigen::VectorXd& init, int dim, std::string_view side) {
  if (init.size() == 0) return Eigen::VectorXd::Zero(dim);
  if (init.size() != dim) {
    throw ArgumentError(fmt::format("init for {} has dimension {}, expected {}", side,
                                    init.size(), dim));
  }
  return init;
}

EstimationResult estimate_with(const ModelSpec& spec, const LergmGraph& graph,
                               const EstimatorConfig& config, const SideObjective& objective,
                               std::string_view name) {
  config.validate();
  if (!(graph.partition() == spec.partition())) {
    throw ArgumentError("graph partition does not match the model");
  }
  const LabelData w = collect_labels(spec, graph, Side::kWithin);
  const LabelData b = collect_labels(spec, graph, Side::kBetween);
  const SideSolution sw =
      solve_side(w, objective, initial_point(config.init.within, spec.d_within(), "beta_W"),
                 config.radius_w, config, fmt::format("{} objective (W)", name));
  const SideSolution sb =
      solve_side(b, objective, initial_point(config.init.between, spec.d_between(), "beta_B"),
                 config.radius_b, config, fmt::format("{} objective (B)", name));

  EstimationResult result;
  result.estimate = {sw.estimate, sb.estimate};
  result.converged = sw.converged && sb.converged;
  result.iterations = sw.bfgs.iterations + sb.bfgs.iterations;
  result.final_grad_norm = std::max(sw.bfgs.grad_norm, sb.bfgs.grad_norm);
  result.final_objective_w = sw.objective;
  result.final_objective_b = sb.objective;
  result.hessian_min_eig_w = sw.hessian_min_eig;
  result.hessian_min_eig_b = sb.hessian_min_eig;
  result.on_boundary = sw.bfgs.on_boundary || sb.bfgs.on_boundary;
  return result;
}

std::string label_text(const BlockPartition& partition, const BlockPair& pair, int u, int v) {
  const int a = partition.offset(pair.k) + u + 1;
  const int b = partition.offset(pair.l) + v + 1;
  return fmt::format("edge ({},{}) in subgraph {}", a, b, to_string(pair));
}

// Range of Delta_m s over every graph and label: all degree combinations of
// a label's endpoints (with the label removed) are reachable.
struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double x) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
};

Range gap_range(const StatisticSpec& stat, int max_degree) {
  Range r;
  for (int d = 0; d <= max_degree; ++d) r.add(stat.gap(d));
  return r;
}

Range delta_range(const StatisticSpec& stat, const BlockPartition& partition,
                  const BlockPair& pair) {
  const int rows = partition.block_size(pair.k);
  const int cols = partition.block_size(pair.l);
  Range out;
  if (stat.kind() == StatisticKind::kEdges) {
    out.add(1.0);
    return out;
  }
  if (pair.within()) {
    const Range g = gap_range(stat, rows - 2);
    out.add(2.0 * g.lo);
    out.add(2.0 * g.hi);
    return out;
  }
  const Range row = gap_range(stat, cols - 1);
  const Range col = gap_range(stat, rows - 1);
  if (stat.kind() == StatisticKind::kWeightedDegree) {
    out.add(row.lo + col.lo);
    out.add(row.hi + col.hi);
  } else if (stat.side() == 1) {
    out = row;
  } else {
    out = col;
  }
  return out;
}

// Checks sign * Delta_m s >= 0 componentwise over all graphs and labels.
ConditionResult sign_condition(const ModelSpec& spec, double sign, std::string name) {
  ConditionResult result{std::move(name), Verdict::kHolds, "every Delta_m s has the required sign"};
  for (const BlockPair& pair : spec.partition().all_pairs()) {
    if (spec.partition().num_labels(pair) == 0) continue;
    for (const StatisticSpec& stat : spec.stats_for(pair)) {
      const Range r = delta_range(stat, spec.partition(), pair);
      const double worst = sign > 0 ? r.lo : -r.hi;
      if (worst < 0.0) {
        return {result.name, Verdict::kFails,
                fmt::format("'{}' reaches Delta_m s = {:.6g} in subgraph {}", stat.name(),
                            sign > 0 ? r.lo : r.hi, to_string(pair))};
      }
    }
  }
  return result;
}

// Witness scan for (vi)/(vii) and primes: a present label with
// sign * Delta_m s > 0 and an absent label with sign * Delta_m s > 0,
// componentwise strict.
ConditionResult witness_condition(const ModelSpec& spec, const LergmGraph& graph, Side side,
                                  double sign, std::string name) {
  const int dim = side == Side::kWithin ? spec.d_within() : spec.d_between();
  if (dim == 0) return {std::move(name), Verdict::kHolds, "no statistics on this side"};
  std::optional<std::string> removal_witness;
  std::optional<std::string> gap_witness;
  Eigen::VectorXd delta(dim);
  for (const BlockPair& pair : pairs_on(spec.partition(), side)) {
    const Subgraph& sg = graph.subgraph(pair);
    const auto stats = spec.stats_for(pair);
    sg.for_each_label([&](int u, int v) {
      if (removal_witness && gap_witness) return;
      const bool present = sg.has(u, v);
      if (present ? removal_witness.has_value() : gap_witness.has_value()) return;
      change_statistic_into(stats, sg, u, v, delta.data());
      if (((sign * delta).array() > 0.0).all()) {
        (present ? removal_witness : gap_witness) = label_text(spec.partition(), pair, u, v);
      }
    });
  }
  if (removal_witness && gap_witness) {
    return {std::move(name), Verdict::kHolds,
            fmt::format("present {}; absent {}", *removal_witness, *gap_witness)};
  }
  return {std::move(name), Verdict::kFails,
          removal_witness ? "no absent edge with a strict witness"
                          : "no present edge with a strict witness"};
}

ConditionResult definiteness_condition(const ModelSpec& spec, const LergmGraph& graph, Side side,
                                       std::string name) {
  const int dim = side == Side::kWithin ? spec.d_within() : spec.d_between();
  if (dim == 0) return {std::move(name), Verdict::kHolds, "no statistics on this side"};
  const LabelData data = collect_labels(spec, graph, side);
  if (data.num_labels() == 0) {
    return {std::move(name), Verdict::kFails, "no edge labels on this side"};
  }
  const Eigen::MatrixXd outer = data.delta * data.delta.transpose();
  const double lambda = min_eigenvalue(outer);
  if (lambda > 1e-10) {
    return {std::move(name), Verdict::kHolds,
            fmt::format("lambda_min of sum Delta Delta^T = {:.6g}", lambda)};
  }
  return {std::move(name), Verdict::kFails,
          fmt::format("lambda_min of sum Delta Delta^T = {:.6g} <= 1e-10", lambda)};
}

}  // namespace

std::string_view to_string(Side side) { return side == Side::kWithin ? "W" : "B"; }

LabelData collect_labels(const ModelSpec& spec, const LergmGraph& graph, Side side) {
  const auto pairs = pairs_on(spec.partition(), side);
  std::size_t total = 0;
  for (const BlockPair& pair : pairs) total += spec.partition().num_labels(pair);
  const int dim = side == Side::kWithin ? spec.d_within() : spec.d_between();
  LabelData data = allocate(dim, total);
  Eigen::Index column = 0;
  for (const BlockPair& pair : pairs) {
    append_subgraph(spec.stats_for(pair), graph.subgraph(pair), data, column);
  }
  data.subgraph_begin.push_back(column);
  return data;
}

LabelData collect_labels(std::span<const StatisticSpec> stats, const Subgraph& sg) {
  LabelData data = allocate(static_cast<int>(stats.size()), sg.num_labels());
  Eigen::Index column = 0;
  append_subgraph(stats, sg, data, column);
  data.subgraph_begin.push_back(column);
  return data;
}

ObjectiveValue stein_objective(const LabelData& data, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = data.delta.transpose() * beta;
  Eigen::VectorXd sig(eta.size());
  double total = 0.0;
  for (Eigen::Index j = 0; j < eta.size(); ++j) {
    total += softplus(eta[j]);
    sig[j] = sigmoid(eta[j]);
  }
  return {total - beta.dot(data.removal_total), data.delta * sig - data.removal_total};
}

Eigen::MatrixXd stein_hessian(const LabelData& data, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = data.delta.transpose() * beta;
  Eigen::VectorXd weight(eta.size());
  for (Eigen::Index j = 0; j < eta.size(); ++j) weight[j] = link_functions(eta[j]).dsigma;
  return data.delta * weight.asDiagonal() * data.delta.transpose();
}

ObjectiveValue negative_pseudo_loglik(const LabelData& data, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = data.delta.transpose() * beta;
  Eigen::VectorXd residual(eta.size());
  double loglik = 0.0;
  for (Eigen::Index j = 0; j < eta.size(); ++j) {
    const double x = data.present[static_cast<std::size_t>(j)];
    loglik += x * eta[j] - softplus(eta[j]);
    residual[j] = x - sigmoid(eta[j]);
  }
  return {-loglik, -(data.delta * residual)};
}

ObjectiveValue objective_and_gradient_w(const ModelSpec& spec, const LergmGraph& graph,
                                        const Eigen::VectorXd& beta_w) {
  check_dimensions(spec, {beta_w, Eigen::VectorXd::Zero(spec.d_between())});
  return stein_objective(collect_labels(spec, graph, Side::kWithin), beta_w);
}

ObjectiveValue objective_and_gradient_b(const ModelSpec& spec, const LergmGraph& graph,
                                        const Eigen::VectorXd& beta_b) {
  check_dimensions(spec, {Eigen::VectorXd::Zero(spec.d_within()), beta_b});
  return stein_objective(collect_labels(spec, graph, Side::kBetween), beta_b);
}

Eigen::MatrixXd hessian_w(const ModelSpec& spec, const LergmGraph& graph,
                          const Eigen::VectorXd& beta_w) {
  check_dimensions(spec, {beta_w, Eigen::VectorXd::Zero(spec.d_between())});
  return stein_hessian(collect_labels(spec, graph, Side::kWithin), beta_w);
}

Eigen::MatrixXd hessian_b(const ModelSpec& spec, const LergmGraph& graph,
                          const Eigen::VectorXd& beta_b) {
  check_dimensions(spec, {Eigen::VectorXd::Zero(spec.d_within()), beta_b});
  return stein_hessian(collect_labels(spec, graph, Side::kBetween), beta_b);
}

void EstimatorConfig::validate() const {
  if (!(grad_tol > 0.0)) throw ArgumentError("grad_tol must be > 0");
  if (max_iters < 0) throw ArgumentError("max_iters must be >= 0");
  if (!(armijo_c1 > 0.0 && armijo_c1 < 1.0)) throw ArgumentError("armijo c1 must be in (0, 1)");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw ArgumentError("backtrack must be in (0, 1)");
  if (!(radius_w > 0.0) || !(radius_b > 0.0)) throw ArgumentError("radii must be > 0");
}

EstimationResult estimate_stein(const ModelSpec& spec, const LergmGraph& graph,
                                const EstimatorConfig& config) {
  return estimate_with(spec, graph, config, stein_objective, "Stein");
}

EstimationResult estimate_mple(const ModelSpec& spec, const LergmGraph& graph,
                               const EstimatorConfig& config) {
  return estimate_with(spec, graph, config, negative_pseudo_loglik, "pseudo-likelihood");
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kHolds:
      return "holds";
    case Verdict::kFails:
      return "fails";
    case Verdict::kNotChecked:
      break;
  }
  return "not-checked";
}

const ConditionResult& AssumptionReport::get(std::string_view name) const {
  for (const auto& c : conditions) {
    if (c.name == name) return c;
  }
  throw ArgumentError(fmt::format("unknown condition '{}'", name));
}

AssumptionReport check_assumptions(const ModelSpec& spec, const LergmGraph& graph) {
  if (!(graph.partition() == spec.partition())) {
    throw ArgumentError("graph partition does not match the model");
  }
  const BlockPartition& partition = spec.partition();
  const auto k = static_cast<std::size_t>(partition.num_blocks());
  const auto m = static_cast<std::size_t>(partition.max_block_size());
  AssumptionReport report;
  auto& c = report.conditions;

  const bool dims_ok = static_cast<std::size_t>(spec.d_within()) <= k * m * (m - 1) / 2 &&
                       static_cast<std::size_t>(spec.d_between()) <= k * (k - 1) / 2 * m * m;
  c.push_back({"(i)", dims_ok ? Verdict::kHolds : Verdict::kFails,
               fmt::format("d1 = {}, d2 = {}, K = {}, M = {}", spec.d_within(),
                           spec.d_between(), k, m)});
  c.push_back(definiteness_condition(spec, graph, Side::kWithin, "(ii)"));
  c.push_back(definiteness_condition(spec, graph, Side::kBetween, "(iii)"));

  // Removal differences are x_m * Delta_m s, so the removal sign and the
  // removal-vs-change inequality both reduce to the sign of Delta_m s.
  c.push_back(sign_condition(spec, 1.0, "(iv)"));
  c.push_back(sign_condition(spec, 1.0, "(v)"));
  c.push_back(witness_condition(spec, graph, Side::kWithin, 1.0, "(vi)"));
  c.push_back(witness_condition(spec, graph, Side::kBetween, 1.0, "(vii)"));
  c.push_back(sign_condition(spec, -1.0, "(iv)'"));
  c.push_back(sign_condition(spec, -1.0, "(v)'"));
  c.push_back(witness_condition(spec, graph, Side::kWithin, -1.0, "(vi)'"));
  c.push_back(witness_condition(spec, graph, Side::kBetween, -1.0, "(vii)'"));

  auto all = [&](std::initializer_list<std::string_view> names) {
    return std::all_of(names.begin(), names.end(),
                       [&](std::string_view n) { return report.holds(n); });
  };
  report.unique_minimizer_guaranteed =
      all({"(i)", "(ii)", "(iii)"}) &&
      (all({"(iv)", "(v)", "(vi)", "(vii)"}) || all({"(iv)'", "(v)'", "(vi)'", "(vii)'"}));
  return report;
}

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  if (symmetric.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace lergm
