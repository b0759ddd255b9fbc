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

// Stein-identity residuals, second-moment matrices at the true parameter,
// explicit concentration and normal-approximation bounds, and replicate
// studies of the estimator's sampling distribution.

#ifndef LERGM_DIAGNOSTICS_HPP_
#define LERGM_DIAGNOSTICS_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lergm/estimator.hpp"
#include "lergm/sampler.hpp"
#include "lergm/statistics.hpp"

namespace lergm {

// Glauber-dynamics Stein operator on one subgraph:
//   (A f)(x) = sum_m sigma(<beta, Delta_m s(x)>) Delta_m f(x) + f(diamond^0_m x) - f(x).
Eigen::VectorXd stein_operator(std::span<const StatisticSpec> stats, const Eigen::VectorXd& beta,
                               const Subgraph& x, const SubgraphFunctional& f);

// Per-subgraph Stein summand with f = s, i.e. this subgraph's share of g.
Eigen::VectorXd stein_summand(std::span<const StatisticSpec> stats, const Eigen::VectorXd& beta,
                              const Subgraph& x);

enum class ExpectationMethod { kExact, kMonteCarlo };

struct ExpectationOptions {
  ExpectationMethod method = ExpectationMethod::kExact;
  SamplerConfig sampler;
  int n_samples = 10000;
};

// E[A f(X_{k,l})] under the model at beta.
Eigen::VectorXd stein_identity_residual(const ModelSpec& spec, const ParameterVector& beta,
                                        const BlockPair& pair, const SubgraphFunctional& f,
                                        const ExpectationOptions& options = {});

struct SideMoments {
  Eigen::MatrixXd egg;  // E[g g^T]
  Eigen::MatrixXd eGG;  // E[Hessian]
  Eigen::MatrixXd q;    // egg^{-1/2} eGG
  Eigen::MatrixXd egg_inv_sqrt;
  double upsilon = 0.0;
  double xi = 0.0;
};

struct MomentMatrices {
  SideMoments w;
  SideMoments b;
  std::string method;  // "exact-enumeration" or "monte-carlo(n)"
};

// Symmetric inverse square root; throws SingularityError if an eigenvalue is
// at or below 1e-12.
Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& symmetric, std::string_view what);

// Assembles the per-subgraph expectations at beta_star. Subgraphs with the
// same shape share one computation. Exact enumeration needs every subgraph
// within the enumeration cap.
MomentMatrices estimate_moment_matrices(const ModelSpec& spec, const ParameterVector& beta_star,
                                        const ExpectationOptions& options = {});

// Partial sums of 8 + sum_{k >= 1} 4^k / (k k!).
struct CltConstant {
  double value = 0.0;
  int terms = 0;
  double last_increment = 0.0;
  std::vector<double> partial_sums;  // partial_sums[k] includes terms 1..k
};

CltConstant clt_constant_series(double tolerance = 1e-12, int max_terms = 200);
double clt_constant();

struct ConcentrationInputs {
  int k = 1;
  int m = 1;
  int d1 = 0;
  int d2 = 0;
  double r_w = 0.0;
  double r_b = 0.0;
  double l_w = 0.0;
  double l_b = 0.0;
  double c_w = 0.0;
  double c_b = 0.0;
  double xi_w = 0.0;
  double xi_b = 0.0;
};

struct ConcentrationReport {
  int p = 1;
  // Absent when the side has no parameters.
  std::optional<double> bound_w;
  std::optional<double> bound_b;
  ConcentrationInputs inputs;
};

// pi / sin(pi / d) for d >= 2; for d = 1 the numerically integrated
// int_0^2 log(1 + 2 / eps) d eps.
double covering_integral(int d);

ConcentrationReport concentration_bound(const ConcentrationInputs& inputs, int p);

// Ball radii default to 50 when the estimator runs unconstrained.
inline constexpr double kDefaultRadius = 50.0;

ConcentrationInputs make_concentration_inputs(const ModelSpec& spec, const MomentMatrices& moments,
                                              double radius_w, double radius_b);

struct ReplicateOptions {
  int n_replicates = 1;
  SamplerConfig sampler;  // replicate r uses seed ^ r
  EstimatorConfig estimator;
  bool run_mple = false;
  // Worker threads; 0 uses the hardware concurrency.
  int threads = 0;
  // Also evaluate the Hessian at beta_star and ||g(X, beta_hat)||.
  bool collect_bound_inputs = false;
};

struct ReplicateRecord {
  int replicate = 0;
  std::string error;  // sampling or estimation failure
  std::optional<EstimationResult> stein;
  std::optional<EstimationResult> mple;
  double stein_seconds = 0.0;
  double mple_seconds = 0.0;
  Eigen::MatrixXd hessian_star_w;
  Eigen::MatrixXd hessian_star_b;
  double grad_norm_w = 0.0;
  double grad_norm_b = 0.0;

  bool ok() const { return error.empty() && stein.has_value(); }
};

// Replicates run on a worker pool and are returned in replicate order.
std::vector<ReplicateRecord> run_replicates(const ModelSpec& spec, const ParameterVector& beta_star,
                                            const ReplicateOptions& options);

struct CoverageReport {
  ConcentrationReport bound;
  int replicates = 0;
  int failures = 0;  // counted as violations
  double coverage_w = 0.0;
  double coverage_b = 0.0;
  // Both sides inside their bounds.
  double coverage = 0.0;
};

CoverageReport coverage_from_replicates(const std::vector<ReplicateRecord>& records,
                                        const ParameterVector& beta_star,
                                        const ConcentrationReport& bound);

CoverageReport empirical_coverage(const ModelSpec& spec, const ParameterVector& beta_star, int p,
                                  const ReplicateOptions& options,
                                  const ExpectationOptions& moment_options = {});

// sup_x |F_n(x) - Phi(x)|.
double ks_distance_to_normal(std::vector<double> sample);
// int |F_n(x) - Phi(x)| dx, exact.
double w1_distance_to_normal(std::vector<double> sample);

struct CoordinateNormality {
  std::string name;  // e.g. "W1", "B2"
  double ks = 0.0;
  double w1 = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  // Sorted standardized values with the matching normal quantiles.
  std::vector<double> sorted;
  std::vector<double> normal_quantiles;
};

struct NormalityReport {
  int replicates = 0;
  int excluded = 0;
  std::vector<CoordinateNormality> coordinates;
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;  // ddof = 1
};

// Standardizes Q_W (beta_hat_W - beta_W*) and Q_B (beta_hat_B - beta_B*)
// over converged replicates.
NormalityReport normality_from_replicates(const std::vector<ReplicateRecord>& records,
                                          const ParameterVector& beta_star,
                                          const MomentMatrices& moments);

NormalityReport normality_diagnostic(const ModelSpec& spec, const ParameterVector& beta_star,
                                     const ReplicateOptions& options,
                                     const ExpectationOptions& moment_options = {});

// Monte Carlo inputs of the normal-approximation bound for one side.
struct ReplicateStats {
  double mean_sq_error = 0.0;     // E ||beta_hat - beta*||^2
  double mean_quartic_error = 0.0;  // E ||beta_hat - beta*||^4
  double hessian_deviation_sq = 0.0;  // E ||G(X, beta*) - E G||^2, spectral norm
  double mean_grad_norm = 0.0;    // E ||g(X, beta_hat)||
};

struct SideReplicateStats {
  ReplicateStats w;
  ReplicateStats b;
};

SideReplicateStats replicate_stats(const std::vector<ReplicateRecord>& records,
                                   const ParameterVector& beta_star, const MomentMatrices& moments);

struct BoundTerm {
  std::string side;   // "W" or "B"
  std::string label;  // "clt", "linearization", "root"
  double value = 0.0;
};

struct WassersteinBound {
  std::vector<BoundTerm> terms;
  double total_w = 0.0;
  double total_b = 0.0;
};

WassersteinBound wasserstein_bound_terms(const ModelSpec& spec, const MomentMatrices& moments,
                                         const SideReplicateStats& stats);

}  // namespace lergm

#endif  // LERGM_DIAGNOSTICS_HPP_
