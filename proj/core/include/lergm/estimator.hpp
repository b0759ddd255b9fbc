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

// Stein estimating equations for the within-block (W) and between-block (B)
// parameters, their convex primitives and Hessians, the minimizers, and a
// maximum pseudo-likelihood baseline.

#ifndef LERGM_ESTIMATOR_HPP_
#define LERGM_ESTIMATOR_HPP_

#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lergm/graph.hpp"
#include "lergm/link.hpp"
#include "lergm/statistics.hpp"

namespace lergm {

enum class Side { kWithin, kBetween };

std::string_view to_string(Side side);

// Per-label data of one side of an observed graph, gathered once so that the
// objective is a pass over dense arrays. Column j of `delta` is Delta_m s for
// the j-th label (subgraphs in all_pairs() order, labels in enumeration order).
struct LabelData {
  Eigen::MatrixXd delta;
  // Sum over labels of s(x) - s(diamond^0_m x).
  Eigen::VectorXd removal_total;
  std::vector<unsigned char> present;
  // First column of each subgraph, plus a final end marker.
  std::vector<Eigen::Index> subgraph_begin;

  int dim() const { return static_cast<int>(delta.rows()); }
  Eigen::Index num_labels() const { return delta.cols(); }
};

LabelData collect_labels(const ModelSpec& spec, const LergmGraph& graph, Side side);
// Labels of a single subgraph.
LabelData collect_labels(std::span<const StatisticSpec> stats, const Subgraph& sg);

struct ObjectiveValue {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

// G = sum_m Sigma(<beta, Delta_m s>) + <beta, s(diamond^0_m x) - s(x)>,
// g = sum_m sigma(<beta, Delta_m s>) Delta_m s + s(diamond^0_m x) - s(x).
ObjectiveValue stein_objective(const LabelData& data, const Eigen::VectorXd& beta);
// sum_m sigma'(<beta, Delta_m s>) Delta_m s Delta_m s^T.
Eigen::MatrixXd stein_hessian(const LabelData& data, const Eigen::VectorXd& beta);

ObjectiveValue objective_and_gradient_w(const ModelSpec& spec, const LergmGraph& graph,
                                        const Eigen::VectorXd& beta_w);
ObjectiveValue objective_and_gradient_b(const ModelSpec& spec, const LergmGraph& graph,
                                        const Eigen::VectorXd& beta_b);
Eigen::MatrixXd hessian_w(const ModelSpec& spec, const LergmGraph& graph,
                          const Eigen::VectorXd& beta_w);
Eigen::MatrixXd hessian_b(const ModelSpec& spec, const LergmGraph& graph,
                          const Eigen::VectorXd& beta_b);

struct EstimatorConfig {
  double grad_tol = 1e-8;
  int max_iters = 500;
  double armijo_c1 = 1e-4;
  double backtrack = 0.5;
  // Ball constraints ||beta_W|| <= radius_w, ||beta_B|| <= radius_b.
  double radius_w = std::numeric_limits<double>::infinity();
  double radius_b = std::numeric_limits<double>::infinity();
  // Starting point; empty vectors mean zero.
  ParameterVector init;

  void validate() const;
};

struct EstimationResult {
  ParameterVector estimate;
  bool converged = false;
  int iterations = 0;
  double final_grad_norm = 0.0;
  double final_objective_w = 0.0;
  double final_objective_b = 0.0;
  double hessian_min_eig_w = 0.0;
  double hessian_min_eig_b = 0.0;
  bool on_boundary = false;
};

// Minimizes G_W and G_B. If the observed labels are separable so that the
// objective keeps decreasing along a ray, the result has converged = false.
EstimationResult estimate_stein(const ModelSpec& spec, const LergmGraph& graph,
                                const EstimatorConfig& config = {});

// Maximizes sum_m x_m <beta, Delta_m s> - Sigma(<beta, Delta_m s>).
EstimationResult estimate_mple(const ModelSpec& spec, const LergmGraph& graph,
                               const EstimatorConfig& config = {});

// Negative log pseudo-likelihood of one side and its gradient.
ObjectiveValue negative_pseudo_loglik(const LabelData& data, const Eigen::VectorXd& beta);

enum class Verdict { kHolds, kFails, kNotChecked };

std::string_view to_string(Verdict verdict);

struct ConditionResult {
  std::string name;  // "(i)", "(iv)'", ...
  Verdict verdict = Verdict::kNotChecked;
  std::string detail;  // witness or reason
};

struct AssumptionReport {
  std::vector<ConditionResult> conditions;
  bool unique_minimizer_guaranteed = false;

  const ConditionResult& get(std::string_view name) const;
  bool holds(std::string_view name) const { return get(name).verdict == Verdict::kHolds; }
};

AssumptionReport check_assumptions(const ModelSpec& spec, const LergmGraph& graph);

// Minimum eigenvalue of a symmetric matrix (0 for an empty matrix).
double min_eigenvalue(const Eigen::MatrixXd& symmetric);

}  // namespace lergm

#endif  // LERGM_ESTIMATOR_HPP_
