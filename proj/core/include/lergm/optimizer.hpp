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

// BFGS with Armijo backtracking and optional projection onto a centered ball.

#ifndef LERGM_OPTIMIZER_HPP_
#define LERGM_OPTIMIZER_HPP_

#include <functional>
#include <limits>
#include <string>

#include <Eigen/Core>

namespace lergm {

struct BfgsOptions {
  double grad_tol = 1e-8;  // infinity norm
  int max_iters = 500;
  double armijo_c1 = 1e-4;
  double backtrack = 0.5;
  // Iterates are projected onto {x : ||x|| <= radius}.
  double radius = std::numeric_limits<double>::infinity();
  // Used in error messages.
  std::string label = "objective";

  void validate() const;
};

struct BfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  Eigen::VectorXd gradient;
  int iterations = 0;
  bool converged = false;
  // The ball constraint is active and the KKT conditions hold.
  bool on_boundary = false;
  // Infinity norm of the gradient, or of its tangential part on the boundary.
  double grad_norm = 0.0;
};

// Returns f(x) and writes the gradient into *grad.
using ObjectiveFn = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

// Throws NumericalError if f or its gradient turns non-finite.
BfgsResult minimize_bfgs(const ObjectiveFn& f, Eigen::VectorXd x0, const BfgsOptions& options);

}  // namespace lergm

#endif  // LERGM_OPTIMIZER_HPP_
