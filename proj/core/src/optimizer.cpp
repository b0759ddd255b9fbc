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

#include "lergm/optimizer.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "lergm/errors.hpp"

namespace lergm {
namespace {

constexpr double kApproxWolfeEps = 1e-6;
constexpr double kWolfeDelta = 0.1;
constexpr double kWolfeSigma = 0.9;

Eigen::VectorXd project(const Eigen::VectorXd& x, double radius) {
  if (!std::isfinite(radius)) return x;
  const double norm = x.norm();
  if (norm <= radius) return x;
  return x * (radius / norm);
}

bool active(const Eigen::VectorXd& x, double radius) {
  return std::isfinite(radius) && x.norm() >= radius * (1.0 - 1e-12);
}

// Infinity norm of the stationarity residual. On the sphere only the
// tangential part counts, provided -grad points outward.
double stationarity(const Eigen::VectorXd& x, const Eigen::VectorXd& grad, double radius,
                    bool* on_boundary) {
  *on_boundary = false;
  if (active(x, radius) && x.norm() > 0.0) {
    const Eigen::VectorXd n = x.normalized();
    const double normal = grad.dot(n);
    if (normal <= 0.0) {
      *on_boundary = true;
      return (grad - normal * n).lpNorm<Eigen::Infinity>();
    }
  }
  return grad.lpNorm<Eigen::Infinity>();
}

std::string format_vector(const Eigen::VectorXd& x) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out += fmt::format("{}{:.17g}", i ? ", " : "", x[i]);
  }
  return out + ")";
}

double evaluate(const ObjectiveFn& f, const Eigen::VectorXd& x, Eigen::VectorXd* grad,
                const std::string& label) {
  const double value = f(x, grad);
  if (!std::isfinite(value) || !grad->allFinite()) {
    throw NumericalError(
        fmt::format("{} is not finite at beta = {}", label, format_vector(x)));
  }
  return value;
}

}  // namespace

void BfgsOptions::validate() const {
  if (!(grad_tol > 0.0)) throw ArgumentError("grad_tol must be > 0");
  if (max_iters < 0) throw ArgumentError("max_iters must be >= 0");
  if (!(armijo_c1 > 0.0 && armijo_c1 < 1.0)) throw ArgumentError("armijo c1 must be in (0, 1)");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw ArgumentError("backtrack must be in (0, 1)");
  if (!(radius > 0.0)) throw ArgumentError("radius must be > 0");
}

BfgsResult minimize_bfgs(const ObjectiveFn& f, Eigen::VectorXd x0, const BfgsOptions& options) {
  options.validate();
  const Eigen::Index n = x0.size();
  BfgsResult result;
  result.x = project(x0, options.radius);
  result.gradient = Eigen::VectorXd::Zero(n);
  result.value = evaluate(f, result.x, &result.gradient, options.label);
  result.grad_norm = stationarity(result.x, result.gradient, options.radius, &result.on_boundary);
  if (n == 0 || result.grad_norm <= options.grad_tol) {
    result.converged = true;
    return result;
  }

  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);  // inverse Hessian estimate
  bool scaled = false;
  Eigen::VectorXd trial_grad(n);

  while (result.iterations < options.max_iters) {
    ++result.iterations;
    Eigen::VectorXd p = -h * result.gradient;
    if (!(result.gradient.dot(p) < 0.0)) {
      h.setIdentity();
      scaled = false;
      p = -result.gradient;
    }

    double t = 1.0;
    bool accepted = false;
    Eigen::VectorXd trial;
    double trial_value = 0.0;
    for (int attempt = 0; attempt < 60; ++attempt, t *= options.backtrack) {
      trial = project(result.x + t * p, options.radius);
      const Eigen::VectorXd step = trial - result.x;
      const double slope = result.gradient.dot(step);
      if (!(slope < 0.0)) {
        // Projection can undo descent; fall back to steepest descent once.
        if (p != -result.gradient) {
          p = -result.gradient;
          h.setIdentity();
          scaled = false;
          t = 1.0 / options.backtrack;
          continue;
        }
        break;
      }
      trial_value = evaluate(f, trial, &trial_grad, options.label);
      if (trial_value <= result.value + options.armijo_c1 * slope) {
        accepted = true;
        break;
      }
      // Near the minimizer rounding in f swamps the Armijo test; fall back to
      // the approximate Wolfe conditions, which only rely on the gradient.
      const double trial_slope = trial_grad.dot(step);
      if (trial_value <= result.value + kApproxWolfeEps * std::abs(result.value) &&
          trial_slope >= kWolfeSigma * slope && trial_slope <= (2.0 * kWolfeDelta - 1.0) * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // no further progress in floating point

    const Eigen::VectorXd s = trial - result.x;
    const Eigen::VectorXd y = trial_grad - result.gradient;
    result.x = trial;
    result.value = trial_value;
    result.gradient = trial_grad;
    result.grad_norm = stationarity(result.x, result.gradient, options.radius, &result.on_boundary);
    if (result.grad_norm <= options.grad_tol) {
      result.converged = true;
      return result;
    }

    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (!scaled) {
        h *= sy / y.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n) - rho * s * y.transpose();
      h = v * h * v.transpose() + rho * s * s.transpose();
    }
  }
  result.grad_norm = stationarity(result.x, result.gradient, options.radius, &result.on_boundary);
  result.converged = result.grad_norm <= options.grad_tol;
  return result;
}

}  // namespace lergm
