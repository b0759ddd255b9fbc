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

#include "lergm/diagnostics.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <thread>
#include <utility>

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <fmt/format.h>

#include "lergm/errors.hpp"
#include "lergm/link.hpp"
#include "lergm/rng.hpp"

namespace lergm {
namespace {

int side_dim(const ModelSpec& spec, Side side) {
  return side == Side::kWithin ? spec.d_within() : spec.d_between();
}

// Expectations of one subgraph's Stein summand outer product, Hessian, and
// sum of change-statistic outer products.
struct BlockMoments {
  Eigen::MatrixXd uu;
  Eigen::MatrixXd hessian;
  Eigen::MatrixXd delta_outer;

  explicit BlockMoments(int d)
      : uu(Eigen::MatrixXd::Zero(d, d)),
        hessian(Eigen::MatrixXd::Zero(d, d)),
        delta_outer(Eigen::MatrixXd::Zero(d, d)) {}

  void add(std::span<const StatisticSpec> stats, const Eigen::VectorXd& beta, const Subgraph& x,
           double weight) {
    const LabelData data = collect_labels(stats, x);
    const Eigen::VectorXd u = stein_objective(data, beta).gradient;
    uu.noalias() += weight * u * u.transpose();
    hessian.noalias() += weight * stein_hessian(data, beta);
    delta_outer.noalias() += weight * data.delta * data.delta.transpose();
  }
};

BlockMoments block_moments(std::span<const StatisticSpec> stats, const Eigen::VectorXd& beta,
                           const Subgraph& shape, const ExpectationOptions& options,
                           std::uint64_t stream) {
  BlockMoments out(static_cast<int>(stats.size()));
  if (options.method == ExpectationMethod::kExact) {
    SubgraphDistribution dist = enumerate_subgraph_distribution(stats, beta, shape);
    Subgraph state = dist.shape;
    for_each_state(state, [&](std::uint64_t mask, const Subgraph& x) {
      out.add(stats, beta, x, dist.probability[mask]);
    });
    return out;
  }
  if (options.n_samples < 1) throw ArgumentError("n_samples must be >= 1");
  SamplerConfig config = options.sampler;
  config.seed = stream_seed(config.seed, stream);
  const auto draws = sample_subgraph(stats, beta, shape, config, options.n_samples);
  const double weight = 1.0 / static_cast<double>(draws.size());
  for (const Subgraph& x : draws) out.add(stats, beta, x, weight);
  return out;
}

SideMoments side_moments(const ModelSpec& spec, const ParameterVector& beta, Side side,
                         const ExpectationOptions& options, std::uint64_t& stream) {
  const int d = side_dim(spec, side);
  SideMoments out;
  out.egg = Eigen::MatrixXd::Zero(d, d);
  out.eGG = Eigen::MatrixXd::Zero(d, d);
  if (d == 0) return out;

  const BlockPartition& partition = spec.partition();
  std::map<std::pair<int, int>, BlockMoments> cache;
  double upsilon = std::numeric_limits<double>::infinity();
  double xi = std::numeric_limits<double>::infinity();
  for (const BlockPair& pair : partition.all_pairs()) {
    if (pair.within() != (side == Side::kWithin)) continue;
    const std::pair<int, int> key{partition.block_size(pair.k), partition.block_size(pair.l)};
    auto it = cache.find(key);
    if (it == cache.end()) {
      BlockMoments m = block_moments(spec.stats_for(pair), beta.for_pair(pair),
                                     empty_subgraph(partition, pair), options, stream++);
      upsilon = std::min(upsilon, min_eigenvalue(m.uu));
      xi = std::min(xi, min_eigenvalue(m.delta_outer));
      it = cache.emplace(key, std::move(m)).first;
    }
    out.egg += it->second.uu;
    out.eGG += it->second.hessian;
  }
  if (cache.empty()) {
    throw SingularityError(fmt::format("no {} subgraphs carry the {} statistics",
                                       to_string(side), d));
  }
  out.upsilon = upsilon;
  out.xi = xi;
  out.egg_inv_sqrt = inverse_sqrt(out.egg, fmt::format("E[g_{0} g_{0}^T]", to_string(side)));
  out.q = out.egg_inv_sqrt * out.eGG;
  return out;
}

double spectral_norm(const Eigen::MatrixXd& symmetric) {
  if (symmetric.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double standard_normal_cdf(double x) {
  static const boost::math::normal_distribution<double> normal;
  return boost::math::cdf(normal, x);
}

double standard_normal_quantile(double p) {
  static const boost::math::normal_distribution<double> normal;
  return boost::math::quantile(normal, p);
}

double standard_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// Antiderivative of Phi vanishing at -infinity.
double phi_integral(double x) { return x * standard_normal_cdf(x) + standard_normal_pdf(x); }

// int_a^b |c - Phi(t)| dt for a constant level c in (0, 1).
double level_gap(double a, double b, double c) {
  auto signed_part = [c](double lo, double hi) {
    return c * (hi - lo) - (phi_integral(hi) - phi_integral(lo));
  };
  const double cross = standard_normal_quantile(c);
  if (cross <= a || cross >= b) return std::abs(signed_part(a, b));
  return std::abs(signed_part(a, cross)) + std::abs(signed_part(cross, b));
}

std::vector<double> sorted_copy(std::vector<double> sample) {
  if (sample.empty()) throw ArgumentError("sample must be non-empty");
  for (double x : sample) {
    if (!std::isfinite(x)) throw ArgumentError("sample must be finite");
  }
  std::sort(sample.begin(), sample.end());
  return sample;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ReplicateRecord run_one(const ModelSpec& spec, const ParameterVector& beta_star,
                        const ReplicateOptions& options, int r) {
  ReplicateRecord rec;
  rec.replicate = r;
  try {
    SamplerConfig sampler = options.sampler;
    sampler.seed = stream_seed(sampler.seed, static_cast<std::uint64_t>(r));
    const LergmGraph graph = std::move(sample_lergm(spec, beta_star, sampler, 1).front());
    auto start = std::chrono::steady_clock::now();
    rec.stein = estimate_stein(spec, graph, options.estimator);
    rec.stein_seconds = seconds_since(start);
    if (options.run_mple) {
      start = std::chrono::steady_clock::now();
      rec.mple = estimate_mple(spec, graph, options.estimator);
      rec.mple_seconds = seconds_since(start);
    }
    if (options.collect_bound_inputs) {
      rec.hessian_star_w = hessian_w(spec, graph, beta_star.within);
      rec.hessian_star_b = hessian_b(spec, graph, beta_star.between);
      rec.grad_norm_w =
          objective_and_gradient_w(spec, graph, rec.stein->estimate.within).gradient.norm();
      rec.grad_norm_b =
          objective_and_gradient_b(spec, graph, rec.stein->estimate.between).gradient.norm();
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

bool usable(const ReplicateRecord& rec) { return rec.ok() && rec.stein->converged; }

}  // namespace

Eigen::VectorXd stein_operator(std::span<const StatisticSpec> stats, const Eigen::VectorXd& beta,
                               const Subgraph& x, const SubgraphFunctional& f) {
  const Eigen::VectorXd fx = f(x);
  Eigen::VectorXd total = Eigen::VectorXd::Zero(fx.size());
  Eigen::VectorXd delta(static_cast<Eigen::Index>(stats.size()));
  Subgraph work = x;
  x.for_each_label([&](int u, int v) {
    change_statistic_into(stats, x, u, v, delta.data());
    const double p = sigmoid(beta.dot(delta));
    const bool present = x.has(u, v);
    work.set(u, v, true);
    const Eigen::VectorXd f1 = f(work);
    work.set(u, v, false);
    const Eigen::VectorXd f0 = f(work);
    work.set(u, v, present);
    total += p * (f1 - f0) + f0 - fx;
  });
  return total;
}

Eigen::VectorXd stein_summand(std::span<const StatisticSpec> stats, const Eigen::VectorXd& beta,
                              const Subgraph& x) {
  return stein_objective(collect_labels(stats, x), beta).gradient;
}

Eigen::VectorXd stein_identity_residual(const ModelSpec& spec, const ParameterVector& beta,
                                        const BlockPair& pair, const SubgraphFunctional& f,
                                        const ExpectationOptions& options) {
  check_dimensions(spec, beta);
  const auto stats = spec.stats_for(pair);
  const Eigen::VectorXd& b = beta.for_pair(pair);
  const SubgraphFunctional op = [&](const Subgraph& x) { return stein_operator(stats, b, x, f); };
  if (options.method == ExpectationMethod::kExact) {
    return exact_expectation(spec, beta, pair, op);
  }
  if (options.n_samples < 1) throw ArgumentError("n_samples must be >= 1");
  const auto draws = sample_subgraph(stats, b, empty_subgraph(spec.partition(), pair),
                                     options.sampler, options.n_samples);
  Eigen::VectorXd total;
  for (const Subgraph& x : draws) {
    const Eigen::VectorXd value = op(x);
    if (total.size() == 0) total = Eigen::VectorXd::Zero(value.size());
    total += value;
  }
  return total / static_cast<double>(draws.size());
}

Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& symmetric, std::string_view what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  if (lambda.size() > 0 && lambda.minCoeff() <= 1e-12) {
    throw SingularityError(fmt::format("{} has smallest eigenvalue {:.6g} <= 1e-12", what,
                                       lambda.minCoeff()));
  }
  const Eigen::VectorXd scale = lambda.array().rsqrt();
  return solver.eigenvectors() * scale.asDiagonal() * solver.eigenvectors().transpose();
}

MomentMatrices estimate_moment_matrices(const ModelSpec& spec, const ParameterVector& beta_star,
                                        const ExpectationOptions& options) {
  check_dimensions(spec, beta_star);
  std::uint64_t stream = 0;
  MomentMatrices out;
  out.w = side_moments(spec, beta_star, Side::kWithin, options, stream);
  out.b = side_moments(spec, beta_star, Side::kBetween, options, stream);
  out.method = options.method == ExpectationMethod::kExact
                   ? std::string("exact-enumeration")
                   : fmt::format("monte-carlo({})", options.n_samples);
  return out;
}

CltConstant clt_constant_series(double tolerance, int max_terms) {
  CltConstant out;
  out.value = 8.0;
  out.partial_sums.push_back(out.value);
  double power_over_factorial = 1.0;  // 4^k / k!
  for (int k = 1; k <= max_terms; ++k) {
    power_over_factorial *= 4.0 / k;
    const double increment = power_over_factorial / k;
    out.value += increment;
    out.partial_sums.push_back(out.value);
    out.terms = k;
    out.last_increment = increment;
    if (increment < tolerance) break;
  }
  return out;
}

double clt_constant() { return clt_constant_series().value; }

double covering_integral(int d) {
  if (d < 1) throw ArgumentError("dimension must be >= 1");
  if (d >= 2) return std::numbers::pi / std::sin(std::numbers::pi / d);
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate([](double eps) { return std::log1p(2.0 / eps); }, 0.0, 2.0);
}

ConcentrationReport concentration_bound(const ConcentrationInputs& in, int p) {
  if (p < 1) throw ArgumentError("P must be >= 1");
  if (in.k < 1 || in.m < 1) throw ArgumentError("K and M must be >= 1");
  auto side = [&](int d, double xi, double l, double c, double r, double constant,
                  std::string_view name) -> std::optional<double> {
    if (d == 0) return std::nullopt;
    if (!(xi > 0.0)) {
      throw ArgumentError(fmt::format("xi_{} must be > 0, got {}", name, xi));
    }
    const double sd = std::sqrt(static_cast<double>(d));
    const double shape =
        covering_integral(d) +
        std::pow(sd, d / 2.0) * std::abs(2.0 - sd / std::pow(std::numbers::e + 1.0, 1.0 / d));
    const double m = static_cast<double>(in.m);
    return 1.0 / std::sqrt(static_cast<double>(in.k)) / xi * constant * l * shape *
           static_cast<double>(p) * std::pow(m, 5.0 + c) * std::exp(r * l * std::pow(m, c));
  };
  ConcentrationReport out;
  out.p = p;
  out.inputs = in;
  out.bound_w = side(in.d1, in.xi_w, in.l_w, in.c_w, in.r_w, 4096.0 * std::numbers::sqrt2, "W");
  out.bound_b = side(in.d2, in.xi_b, in.l_b, in.c_b, in.r_b, 16384.0, "B");
  return out;
}

ConcentrationInputs make_concentration_inputs(const ModelSpec& spec, const MomentMatrices& moments,
                                              double radius_w, double radius_b) {
  const GrowthConstants g = growth_constants(spec);
  ConcentrationInputs in;
  in.k = spec.partition().num_blocks();
  in.m = spec.partition().max_block_size();
  in.d1 = spec.d_within();
  in.d2 = spec.d_between();
  in.r_w = std::isfinite(radius_w) ? radius_w : kDefaultRadius;
  in.r_b = std::isfinite(radius_b) ? radius_b : kDefaultRadius;
  in.l_w = g.l_within;
  in.l_b = g.l_between;
  in.c_w = g.c_within;
  in.c_b = g.c_between;
  in.xi_w = moments.w.xi;
  in.xi_b = moments.b.xi;
  return in;
}

std::vector<ReplicateRecord> run_replicates(const ModelSpec& spec, const ParameterVector& beta_star,
                                            const ReplicateOptions& options) {
  if (options.n_replicates < 1) throw ArgumentError("n_replicates must be >= 1");
  check_dimensions(spec, beta_star);
  options.sampler.validate();
  options.estimator.validate();
  std::vector<ReplicateRecord> records(static_cast<std::size_t>(options.n_replicates));
  int threads = options.threads > 0 ? options.threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, options.n_replicates);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < options.n_replicates; r = next++) {
      records[static_cast<std::size_t>(r)] = run_one(spec, beta_star, options, r);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return records;
}

CoverageReport coverage_from_replicates(const std::vector<ReplicateRecord>& records,
                                        const ParameterVector& beta_star,
                                        const ConcentrationReport& bound) {
  if (records.empty()) throw ArgumentError("no replicates");
  CoverageReport out;
  out.bound = bound;
  out.replicates = static_cast<int>(records.size());
  int in_w = 0;
  int in_b = 0;
  int in_both = 0;
  for (const auto& rec : records) {
    if (!rec.ok()) {
      ++out.failures;
      continue;
    }
    const bool ok_w = !bound.bound_w ||
                      (rec.stein->estimate.within - beta_star.within).norm() <= *bound.bound_w;
    const bool ok_b = !bound.bound_b ||
                      (rec.stein->estimate.between - beta_star.between).norm() <= *bound.bound_b;
    in_w += ok_w;
    in_b += ok_b;
    in_both += ok_w && ok_b;
  }
  const double n = static_cast<double>(out.replicates);
  out.coverage_w = in_w / n;
  out.coverage_b = in_b / n;
  out.coverage = in_both / n;
  return out;
}

CoverageReport empirical_coverage(const ModelSpec& spec, const ParameterVector& beta_star, int p,
                                  const ReplicateOptions& options,
                                  const ExpectationOptions& moment_options) {
  if (options.n_replicates < 1) throw ArgumentError("n_replicates must be >= 1");
  const MomentMatrices moments = estimate_moment_matrices(spec, beta_star, moment_options);
  const ConcentrationReport bound = concentration_bound(
      make_concentration_inputs(spec, moments, options.estimator.radius_w,
                                options.estimator.radius_b),
      p);
  return coverage_from_replicates(run_replicates(spec, beta_star, options), beta_star, bound);
}

double ks_distance_to_normal(std::vector<double> sample) {
  const std::vector<double> x = sorted_copy(std::move(sample));
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double cdf = standard_normal_cdf(x[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - cdf, cdf - static_cast<double>(i) / n});
  }
  return d;
}

double w1_distance_to_normal(std::vector<double> sample) {
  const std::vector<double> x = sorted_copy(std::move(sample));
  const std::size_t n = x.size();
  // Tails: F_n = 0 left of x_1 and 1 right of x_n.
  double total = phi_integral(x.front()) + phi_integral(-x.back());
  for (std::size_t i = 1; i < n; ++i) {
    if (x[i] > x[i - 1]) {
      total += level_gap(x[i - 1], x[i], static_cast<double>(i) / static_cast<double>(n));
    }
  }
  return total;
}

NormalityReport normality_from_replicates(const std::vector<ReplicateRecord>& records,
                                          const ParameterVector& beta_star,
                                          const MomentMatrices& moments) {
  const Eigen::Index d1 = beta_star.within.size();
  const Eigen::Index d2 = beta_star.between.size();
  std::vector<Eigen::VectorXd> z;
  NormalityReport out;
  for (const auto& rec : records) {
    if (!usable(rec)) {
      ++out.excluded;
      continue;
    }
    Eigen::VectorXd v(d1 + d2);
    if (d1 > 0) v.head(d1) = moments.w.q * (rec.stein->estimate.within - beta_star.within);
    if (d2 > 0) v.tail(d2) = moments.b.q * (rec.stein->estimate.between - beta_star.between);
    z.push_back(std::move(v));
  }
  out.replicates = static_cast<int>(z.size());
  if (z.empty()) throw ArgumentError("no converged replicates to standardize");

  const Eigen::Index dim = d1 + d2;
  const double n = static_cast<double>(z.size());
  out.mean = Eigen::VectorXd::Zero(dim);
  for (const auto& v : z) out.mean += v;
  out.mean /= n;
  out.covariance = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& v : z) out.covariance += (v - out.mean) * (v - out.mean).transpose();
  if (z.size() > 1) out.covariance /= n - 1.0;

  for (Eigen::Index j = 0; j < dim; ++j) {
    CoordinateNormality c;
    c.name = j < d1 ? fmt::format("W{}", j + 1) : fmt::format("B{}", j - d1 + 1);
    std::vector<double> values;
    values.reserve(z.size());
    for (const auto& v : z) values.push_back(v[j]);
    c.ks = ks_distance_to_normal(values);
    c.w1 = w1_distance_to_normal(values);
    c.mean = out.mean[j];
    c.variance = out.covariance(j, j);
    c.sorted = sorted_copy(std::move(values));
    for (std::size_t i = 0; i < c.sorted.size(); ++i) {
      c.normal_quantiles.push_back(standard_normal_quantile((static_cast<double>(i) + 0.5) / n));
    }
    out.coordinates.push_back(std::move(c));
  }
  return out;
}

NormalityReport normality_diagnostic(const ModelSpec& spec, const ParameterVector& beta_star,
                                     const ReplicateOptions& options,
                                     const ExpectationOptions& moment_options) {
  const MomentMatrices moments = estimate_moment_matrices(spec, beta_star, moment_options);
  return normality_from_replicates(run_replicates(spec, beta_star, options), beta_star, moments);
}

SideReplicateStats replicate_stats(const std::vector<ReplicateRecord>& records,
                                   const ParameterVector& beta_star,
                                   const MomentMatrices& moments) {
  SideReplicateStats out;
  int n = 0;
  for (const auto& rec : records) {
    if (!usable(rec)) continue;
    if (rec.hessian_star_w.rows() != beta_star.within.size() ||
        rec.hessian_star_b.rows() != beta_star.between.size()) {
      throw ArgumentError("replicates were run without collecting bound inputs");
    }
    ++n;
    auto accumulate = [](ReplicateStats& s, const Eigen::VectorXd& error,
                         const Eigen::MatrixXd& hessian, const Eigen::MatrixXd& expected,
                         double grad_norm) {
      const double sq = error.squaredNorm();
      s.mean_sq_error += sq;
      s.mean_quartic_error += sq * sq;
      const double dev = spectral_norm(hessian - expected);
      s.hessian_deviation_sq += dev * dev;
      s.mean_grad_norm += grad_norm;
    };
    accumulate(out.w, rec.stein->estimate.within - beta_star.within, rec.hessian_star_w,
               moments.w.eGG, rec.grad_norm_w);
    accumulate(out.b, rec.stein->estimate.between - beta_star.between, rec.hessian_star_b,
               moments.b.eGG, rec.grad_norm_b);
  }
  if (n == 0) throw ArgumentError("no converged replicates");
  for (ReplicateStats* s : {&out.w, &out.b}) {
    s->mean_sq_error /= n;
    s->mean_quartic_error /= n;
    s->hessian_deviation_sq /= n;
    s->mean_grad_norm /= n;
  }
  return out;
}

WassersteinBound wasserstein_bound_terms(const ModelSpec& spec, const MomentMatrices& moments,
                                         const SideReplicateStats& stats) {
  const GrowthConstants g = growth_constants(spec);
  const double k = spec.partition().num_blocks();
  const double m = spec.partition().max_block_size();
  const double clt = std::sqrt(clt_constant()) + std::numbers::sqrt2;
  WassersteinBound out;

  auto side = [&](std::string name, int d, const SideMoments& mom, const ReplicateStats& s,
                  double l, double c, double lead, double label_count) {
    if (d == 0) return 0.0;
    const double upsilon = mom.upsilon;
    if (!(upsilon > 0.0)) {
      throw SingularityError(fmt::format("Upsilon_{} = {} is not positive", name, upsilon));
    }
    const double egg_min = min_eigenvalue(mom.egg);
    if (!(egg_min > 1e-12)) {
      throw SingularityError(fmt::format("E[g_{0} g_{0}^T] is singular", name));
    }
    const double dd = static_cast<double>(d);
    const double t1 = clt * lead * std::pow(dd, 0.75) * l * l /
                      std::min(upsilon, std::pow(upsilon, 0.75)) *
                      std::pow(m, 3.0 * c + 6.0) / std::sqrt(k);
    const double t2 = 1.0 / std::sqrt(k * upsilon) *
                      (std::sqrt(s.hessian_deviation_sq) * std::sqrt(s.mean_sq_error) +
                       dd * dd / 20.0 * k * label_count * l * l * l * std::pow(m, 3.0 * c) *
                           std::sqrt(s.mean_quartic_error));
    const double t3 = s.mean_grad_norm / std::sqrt(egg_min);
    out.terms.push_back({name, "clt", t1});
    out.terms.push_back({name, "linearization", t2});
    out.terms.push_back({name, "root", t3});
    return t1 + t2 + t3;
  };
  out.total_w = side("W", spec.d_within(), moments.w, stats.w, g.l_within, g.c_within, 1.0,
                     m * (m - 1.0) / 2.0);
  out.total_b = side("B", spec.d_between(), moments.b, stats.b, g.l_between, g.c_between, 4.0,
                     m * m);
  return out;
}

}  // namespace lergm
