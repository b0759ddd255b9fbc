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

#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "CLI11.hpp"
#include "lergm/config.hpp"
#include "lergm/diagnostics.hpp"
#include "lergm/errors.hpp"
#include "lergm/estimator.hpp"
#include "lergm/experiment.hpp"
#include "lergm/graph_io.hpp"
#include "lergm/sampler.hpp"

namespace lergm::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config;
  std::string graph;
  std::string out;
  std::string beta;
  std::string p_values = "2,5";
  std::uint64_t seed = 0;
  int count = 1;
  int samples = 10000;
  double tol = 1e-8;
  bool exact = false;
  bool mple = false;
};

// Thrown for inconsistent command-line input after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

RunConfig load(const Options& o, const CLI::App& sub) {
  RunConfig config = load_run_config(o.config);
  if (sub.count("--seed")) {
    config.seed = o.seed;
    config.sampler.seed = o.seed;
    config.moments.sampler.seed = o.seed;
  }
  const CLI::Option* out = sub.get_option_no_throw("--out");
  if (out != nullptr && out->count() > 0) config.output_dir = o.out;
  return config;
}

ParameterVector beta_from(const Options& o, const CLI::App& sub, const RunConfig& config) {
  if (!sub.count("--beta")) return config.true_beta;
  const Eigen::VectorXd v = parse_vector(o.beta);
  const int d1 = config.model.d_within();
  const int d2 = config.model.d_between();
  if (v.size() != d1 + d2) {
    throw UsageError(fmt::format("--beta has {} values, model needs d1 + d2 = {}", v.size(),
                                 d1 + d2));
  }
  return {v.head(d1), v.tail(d2)};
}

void print_result(std::ostream& out, std::string_view name, const EstimationResult& r,
                  const std::vector<std::string>& params) {
  fmt::print(out, "estimator={}\n", name);
  fmt::print(out, "converged={}\n", r.converged);
  fmt::print(out, "iterations={}\n", r.iterations);
  fmt::print(out, "final_grad_norm={}\n", format_double(r.final_grad_norm));
  fmt::print(out, "final_objective_w={}\n", format_double(r.final_objective_w));
  fmt::print(out, "final_objective_b={}\n", format_double(r.final_objective_b));
  fmt::print(out, "hessian_min_eig_w={}\n", format_double(r.hessian_min_eig_w));
  fmt::print(out, "hessian_min_eig_b={}\n", format_double(r.hessian_min_eig_b));
  fmt::print(out, "on_boundary={}\n", r.on_boundary);
  const Eigen::Index d1 = r.estimate.within.size();
  for (std::size_t j = 0; j < params.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    const double v = i < d1 ? r.estimate.within[i] : r.estimate.between[i - d1];
    fmt::print(out, "beta_{}={}\n", params[j], format_double(v));
  }
}

void write_result_csv(const fs::path& path,
                      const std::vector<std::pair<std::string, EstimationResult>>& results,
                      const std::vector<std::string>& params) {
  std::ofstream csv(path, std::ios::binary);
  if (!csv) throw UsageError(fmt::format("cannot write '{}'", path.string()));
  csv << "estimator,converged,iterations,final_grad_norm,final_objective_w,final_objective_b,"
         "hessian_min_eig_w,hessian_min_eig_b,on_boundary";
  for (const auto& p : params) csv << ",beta_" << p;
  csv << '\n';
  for (const auto& [name, r] : results) {
    csv << name << ',' << (r.converged ? "true" : "false") << ',' << r.iterations << ','
        << format_double(r.final_grad_norm) << ',' << format_double(r.final_objective_w) << ','
        << format_double(r.final_objective_b) << ',' << format_double(r.hessian_min_eig_w) << ','
        << format_double(r.hessian_min_eig_b) << ',' << (r.on_boundary ? "true" : "false");
    for (Eigen::Index i = 0; i < r.estimate.within.size(); ++i) {
      csv << ',' << format_double(r.estimate.within[i]);
    }
    for (Eigen::Index i = 0; i < r.estimate.between.size(); ++i) {
      csv << ',' << format_double(r.estimate.between[i]);
    }
    csv << '\n';
  }
}

std::ofstream open_csv(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError(fmt::format("cannot write '{}'", path.string()));
  return out;
}

int cmd_sample(const Options& o, const CLI::App& sub, std::ostream& out) {
  const RunConfig config = load(o, sub);
  if (o.count < 1) throw UsageError("--count must be >= 1");
  const ParameterVector beta = beta_from(o, sub, config);
  const auto draws = sample_lergm(config.model, beta, config.sampler, o.count);
  fs::create_directories(config.output_dir);
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const fs::path path = config.output_dir / fmt::format("graph_{:04d}.txt", i + 1);
    write_graph_file(path, draws[i]);
    fmt::print(out, "{}\n", path.string());
  }
  return kExitOk;
}

int cmd_estimate(const Options& o, const CLI::App& sub, std::ostream& out) {
  const RunConfig config = load(o, sub);
  const LergmGraph graph = read_graph_file(o.graph);
  const auto params = parameter_names(config.model);
  std::vector<std::pair<std::string, EstimationResult>> results;
  results.emplace_back("SE", estimate_stein(config.model, graph, config.estimator));
  if (o.mple) results.emplace_back("MPLE", estimate_mple(config.model, graph, config.estimator));
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (i > 0) out << '\n';
    print_result(out, results[i].first, results[i].second, params);
  }
  if (sub.count("--out")) write_result_csv(o.out, results, params);
  return kExitOk;
}

int cmd_check(const Options& o, const CLI::App& sub, std::ostream& out) {
  const RunConfig config = load(o, sub);
  const LergmGraph graph = read_graph_file(o.graph);
  const AssumptionReport report = check_assumptions(config.model, graph);
  for (const auto& c : report.conditions) {
    fmt::print(out, "{:<7} {:<11} {}\n", c.name, to_string(c.verdict), c.detail);
  }
  fmt::print(out, "overall={}\n",
             report.unique_minimizer_guaranteed ? "unique-minimizer-guaranteed"
                                                : "not-guaranteed");
  return kExitOk;
}

std::vector<int> parse_p_values(const std::string& text) {
  std::vector<int> ps;
  for (double v : parse_vector(text)) {
    if (v < 1.0 || v != std::floor(v)) throw UsageError("--p values must be positive integers");
    ps.push_back(static_cast<int>(v));
  }
  return ps;
}

void write_matrix_rows(std::ostream& csv, std::string_view side, std::string_view name,
                       const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      csv << side << ',' << name << ',' << i + 1 << ',' << j + 1 << ',' << format_double(m(i, j))
          << '\n';
    }
  }
}

int cmd_diagnose(const Options& o, const CLI::App& sub, std::ostream& out) {
  const RunConfig config = load(o, sub);
  const std::vector<int> ps = parse_p_values(o.p_values);
  const fs::path dir = config.output_dir;
  fs::create_directories(dir);

  const MomentMatrices moments =
      estimate_moment_matrices(config.model, config.true_beta, config.moments);
  {
    auto csv = open_csv(dir / "moments.csv");
    csv << "side,quantity,row,col,value\n";
    for (const auto& [side, m] : {std::pair<std::string, const SideMoments*>{"W", &moments.w},
                                  std::pair<std::string, const SideMoments*>{"B", &moments.b}}) {
      if (m->egg.size() == 0) continue;
      write_matrix_rows(csv, side, "egg", m->egg);
      write_matrix_rows(csv, side, "eGG", m->eGG);
      write_matrix_rows(csv, side, "q", m->q);
      csv << side << ",upsilon,,," << format_double(m->upsilon) << '\n';
      csv << side << ",xi,,," << format_double(m->xi) << '\n';
    }
  }

  ReplicateOptions options;
  options.n_replicates = config.replicates;
  options.sampler = config.sampler;
  options.estimator = config.estimator;
  options.threads = config.threads;
  options.collect_bound_inputs = true;
  const auto records = run_replicates(config.model, config.true_beta, options);

  const ConcentrationInputs inputs = make_concentration_inputs(
      config.model, moments, config.estimator.radius_w, config.estimator.radius_b);
  {
    auto csv = open_csv(dir / "concentration.csv");
    csv << "P,bound_w,bound_b,coverage_w,coverage_b,coverage,failures\n";
    for (int p : ps) {
      const ConcentrationReport bound = concentration_bound(inputs, p);
      const CoverageReport cov = coverage_from_replicates(records, config.true_beta, bound);
      const double nan = std::numeric_limits<double>::quiet_NaN();
      csv << p << ',' << format_double(bound.bound_w.value_or(nan)) << ','
          << format_double(bound.bound_b.value_or(nan)) << ',' << format_double(cov.coverage_w)
          << ',' << format_double(cov.coverage_b) << ',' << format_double(cov.coverage) << ','
          << cov.failures << '\n';
      fmt::print(out, "P={} bound_w={} bound_b={} coverage={}\n", p,
                 bound.bound_w ? fmt::format("{:.6g}", *bound.bound_w) : "-",
                 bound.bound_b ? fmt::format("{:.6g}", *bound.bound_b) : "-", cov.coverage);
    }
  }

  const NormalityReport normality =
      normality_from_replicates(records, config.true_beta, moments);
  {
    auto csv = open_csv(dir / "normality.csv");
    csv << "coordinate,ks,w1,mean,variance,replicates,excluded\n";
    for (const auto& c : normality.coordinates) {
      csv << c.name << ',' << format_double(c.ks) << ',' << format_double(c.w1) << ','
          << format_double(c.mean) << ',' << format_double(c.variance) << ','
          << normality.replicates << ',' << normality.excluded << '\n';
      fmt::print(out, "{}: ks={:.4f} w1={:.4f} mean={:.4f} variance={:.4f}\n", c.name, c.ks, c.w1,
                 c.mean, c.variance);
    }
    auto plot = open_csv(dir / "normality_plot.csv");
    plot << "coordinate,index,standardized,normal_quantile\n";
    for (const auto& c : normality.coordinates) {
      for (std::size_t i = 0; i < c.sorted.size(); ++i) {
        plot << c.name << ',' << i + 1 << ',' << format_double(c.sorted[i]) << ','
             << format_double(c.normal_quantiles[i]) << '\n';
      }
    }
  }

  const WassersteinBound bound = wasserstein_bound_terms(
      config.model, moments, replicate_stats(records, config.true_beta, moments));
  {
    auto csv = open_csv(dir / "wasserstein.csv");
    csv << "side,term,value\n";
    for (const auto& t : bound.terms) {
      csv << t.side << ',' << t.label << ',' << format_double(t.value) << '\n';
    }
    if (config.model.d_within() > 0) csv << "W,total," << format_double(bound.total_w) << '\n';
    if (config.model.d_between() > 0) csv << "B,total," << format_double(bound.total_b) << '\n';
  }
  fmt::print(out, "moments: {}\n", moments.method);
  fmt::print(out, "upsilon_w={:.6g} xi_w={:.6g} upsilon_b={:.6g} xi_b={:.6g}\n",
             moments.w.upsilon, moments.w.xi, moments.b.upsilon, moments.b.xi);
  fmt::print(out, "wasserstein bound: W={:.6g} B={:.6g}\n", bound.total_w, bound.total_b);
  fmt::print(out, "wrote {}\n", dir.string());
  return kExitOk;
}

int cmd_simulate(const Options& o, const CLI::App& sub, std::ostream& out) {
  const RunConfig config = load(o, sub);
  const ExperimentResult result = run_experiment(config);
  write_experiment(config.output_dir, result);
  fmt::print(out, "{:<5} {:<5} {:>12} {:>12} {:>9}\n", "est", "param", "mse", "std", "included");
  for (const auto& row : result.summary.rows) {
    fmt::print(out, "{:<5} {:<5} {:>12.4e} {:>12.4e} {:>5}/{}\n", row.estimator, row.param,
               row.mse, row.std, row.included, row.included + row.excluded);
  }
  fmt::print(out, "wrote {}\n", config.output_dir.string());
  return kExitOk;
}

int cmd_stein_check(const Options& o, const CLI::App& sub, std::ostream& out) {
  const RunConfig config = load(o, sub);
  const ParameterVector beta = beta_from(o, sub, config);
  ExpectationOptions options = config.moments;
  options.method = o.exact ? ExpectationMethod::kExact : ExpectationMethod::kMonteCarlo;
  if (sub.count("--samples")) options.n_samples = o.samples;
  const BlockPartition& partition = config.model.partition();
  std::map<std::pair<int, int>, double> seen;
  double worst = 0.0;
  for (const BlockPair& pair : partition.all_pairs()) {
    const auto stats = config.model.stats_for(pair);
    if (stats.empty()) continue;
    const std::pair<int, int> shape{pair.within() ? 0 : partition.block_size(pair.k),
                                    partition.block_size(pair.l)};
    if (seen.count(shape)) continue;  // same law as an earlier subgraph
    const SubgraphFunctional s = [stats](const Subgraph& x) { return eval_subgraph(stats, x); };
    const double r =
        stein_identity_residual(config.model, beta, pair, s, options).lpNorm<Eigen::Infinity>();
    seen[shape] = r;
    worst = std::max(worst, r);
    fmt::print(out, "subgraph {} residual_inf={:.3e}\n", to_string(pair), r);
  }
  fmt::print(out, "max_residual_inf={:.3e} tol={:.1e}\n", worst, o.tol);
  return worst < o.tol ? kExitOk : kExitModel;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stein estimation for local-dependence exponential random graph models", "lergm"};
  app.require_subcommand(1, 1);
  Options o;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "Override the configured seed");
  };

  auto* sample = app.add_subcommand("sample", "Draw graphs by Glauber dynamics");
  add_config(sample);
  sample->add_option("--out", o.out, "Directory for graph_NNNN.txt files");
  sample->add_option("--count", o.count, "Number of draws")->capture_default_str();
  sample->add_option("--beta", o.beta, "Comma-separated (beta_W, beta_B); default true_beta");

  auto* estimate = app.add_subcommand("estimate", "Estimate parameters from an observed graph");
  add_config(estimate);
  estimate->add_option("--graph", o.graph, "Observed graph file")
      ->required()
      ->check(CLI::ExistingFile);
  estimate->add_option("--out", o.out, "Also write the result as a CSV file");
  estimate->add_flag("--mple", o.mple, "Also compute the pseudo-likelihood estimate");

  auto* check = app.add_subcommand("check-assumptions",
                                    "Check existence and uniqueness conditions on a graph");
  add_config(check);
  check->add_option("--graph", o.graph, "Observed graph file")
      ->required()
      ->check(CLI::ExistingFile);

  auto* diagnose = app.add_subcommand(
      "diagnose", "Moment matrices, concentration and normal-approximation diagnostics");
  add_config(diagnose);
  diagnose->add_option("--out", o.out, "Output directory for CSV tables");
  diagnose->add_option("--p", o.p_values, "Comma-separated confidence parameters P")
      ->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Run a replicate simulation study");
  add_config(simulate);
  simulate->add_option("--out", o.out, "Output directory for summary.csv and replicates.csv");

  auto* stein = app.add_subcommand("stein-check", "Evaluate the Stein identity residual");
  add_config(stein);
  stein->add_option("--beta", o.beta, "Comma-separated (beta_W, beta_B); default true_beta");
  stein->add_flag("--exact", o.exact, "Exact enumeration instead of Monte Carlo");
  stein->add_option("--samples", o.samples, "Monte Carlo sample count")->capture_default_str();
  stein->add_option("--tol", o.tol, "Pass threshold on the residual")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sample->parsed()) return cmd_sample(o, *sample, out);
    if (estimate->parsed()) return cmd_estimate(o, *estimate, out);
    if (check->parsed()) return cmd_check(o, *check, out);
    if (diagnose->parsed()) return cmd_diagnose(o, *diagnose, out);
    if (simulate->parsed()) return cmd_simulate(o, *simulate, out);
    if (stein->parsed()) return cmd_stein_check(o, *stein, out);
  } catch (const UsageError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const ParseError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitModel;
  }
  return kExitUsage;
}

}  // namespace lergm::cli
