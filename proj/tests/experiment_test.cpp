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


#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "lergm/config.hpp"
#include "lergm/errors.hpp"
#include "lergm/experiment.hpp"

namespace lergm {
namespace {

constexpr const char* kSmallConfig = R"json({
  "blocks": {"count": 6, "size": 5},
  "model": {"within": ["edges"], "between": ["edges"]},
  "true_beta": {"within": [0.5], "between": [-0.5]},
  "sampler": {"burn_in": 5, "thinning": 1},
  "replicates": 8,
  "seed": 11,
  "threads": 2
})json";

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

TEST(ConfigTest, ParsesFullConfig) {
  const RunConfig c = parse_run_config(R"json({
    "blocks": [6, 5, 4],
    "model": {"within": ["edges", "gwd(0.5)"],
              "between": ["edges", "gwd_bipartite(1,1)", "gwd_bipartite(2,1)"]},
    "true_beta": {"within": [1, -1], "between": [1, -1, -1]},
    "sampler": {"burn_in": 50, "thinning": 3, "reject_degenerate": true, "retry_cap": 9},
    "estimator": {"grad_tol": 1e-9, "max_iters": 20, "radius_w": 4, "radius_b": null},
    "moments": {"method": "monte-carlo", "n_samples": 123},
    "replicates": 5, "seed": 42, "run_mple": false, "threads": 1, "output_dir": "x/y"
  })json");
  EXPECT_EQ(c.model.partition().num_blocks(), 3);
  EXPECT_EQ(c.model.d_within(), 2);
  EXPECT_EQ(c.model.d_between(), 3);
  EXPECT_EQ(c.true_beta.between[2], -1.0);
  EXPECT_EQ(c.sampler.burn_in, 50);
  EXPECT_EQ(c.sampler.thinning, 3);
  EXPECT_TRUE(c.sampler.reject_degenerate);
  EXPECT_EQ(c.sampler.retry_cap, 9);
  EXPECT_EQ(c.sampler.seed, 42u);
  EXPECT_EQ(c.moments.sampler.seed, 42u);
  EXPECT_EQ(c.estimator.grad_tol, 1e-9);
  EXPECT_EQ(c.estimator.max_iters, 20);
  EXPECT_EQ(c.estimator.radius_w, 4.0);
  EXPECT_TRUE(std::isinf(c.estimator.radius_b));
  EXPECT_EQ(c.moments.method, ExpectationMethod::kMonteCarlo);
  EXPECT_EQ(c.moments.n_samples, 123);
  EXPECT_EQ(c.replicates, 5);
  EXPECT_FALSE(c.run_mple);
  EXPECT_EQ(c.output_dir, std::filesystem::path("x/y"));
}

TEST(ConfigTest, DefaultsAndBlockShorthand) {
  const RunConfig c = parse_run_config(
      R"({"blocks": {"count": 3, "size": 4}, "model": {"within": ["edges"], "between": []}})");
  EXPECT_EQ(c.model.partition().num_vertices(), 12);
  EXPECT_EQ(c.true_beta.within.size(), 1);
  EXPECT_EQ(c.true_beta.within[0], 0.0);
  EXPECT_EQ(c.replicates, 1);
  EXPECT_TRUE(c.run_mple);
  EXPECT_EQ(c.moments.method, ExpectationMethod::kExact);
}

TEST(ConfigTest, RejectsBadInput) {
  const char* parse_errors[] = {
      "{",
      "[]",
      R"({"model": {"within": ["edges"]}})",
      R"({"blocks": [3], "model": {"within": ["edges"]}, "bogus": 1})",
      R"({"blocks": [3], "model": {"within": ["edges"]}, "sampler": {"burn": 1}})",
      R"({"blocks": [3], "model": {"within": ["nope"]}})",
      R"({"blocks": [3], "model": {"within": ["edges"]}, "moments": {"method": "magic"}})",
  };
  for (const char* text : parse_errors) {
    EXPECT_THROW(parse_run_config(text), ParseError) << text;
  }
  const char* argument_errors[] = {
      R"({"blocks": [3, 0], "model": {"within": ["edges"], "between": ["edges"]}})",
      R"({"blocks": [3], "model": {"within": ["edges"]}, "true_beta": {"within": [1, 2]}})",
      R"({"blocks": [3], "model": {"within": ["edges"]}, "replicates": 0})",
      R"({"blocks": [3], "model": {"within": ["edges"]}, "estimator": {"radius_w": -1}})",
  };
  for (const char* text : argument_errors) {
    EXPECT_THROW(parse_run_config(text), ArgumentError) << text;
  }
  EXPECT_ANY_THROW(load_run_config("/nonexistent/config.json"));
}

TEST(ParseVectorTest, CommaLists) {
  const Eigen::VectorXd v = parse_vector("1,-1, 0.5");
  ASSERT_EQ(v.size(), 3);
  EXPECT_EQ(v[2], 0.5);
  EXPECT_EQ(parse_vector("").size(), 0);
  EXPECT_THROW(parse_vector("1,x"), ParseError);
  EXPECT_THROW(parse_vector("1,2y"), ParseError);
}

TEST(ExperimentTest, SummaryIsRederivableFromReplicates) {
  const RunConfig config = parse_run_config(kSmallConfig);
  const ExperimentResult result = run_experiment(config);
  ASSERT_EQ(result.records.size(), 8u);
  EXPECT_EQ(result.param_names, (std::vector<std::string>{"W1", "B1"}));
  ASSERT_EQ(result.summary.rows.size(), 4u);
  for (const bool mple : {false, true}) {
    for (int j = 0; j < 2; ++j) {
      const double truth = j == 0 ? 0.5 : -0.5;
      double sq = 0.0;
      double sum = 0.0;
      double sum_sq = 0.0;
      int n = 0;
      for (const auto& rec : result.records) {
        const auto& est = mple ? rec.mple : rec.stein;
        ASSERT_TRUE(est.has_value() && est->converged);
        const double v = j == 0 ? est->estimate.within[0] : est->estimate.between[0];
        sq += (v - truth) * (v - truth);
        sum += v;
        sum_sq += v * v;
        ++n;
      }
      const auto& row = result.summary.find(mple ? "MPLE" : "SE", j == 0 ? "W1" : "B1");
      EXPECT_EQ(row.included, n);
      EXPECT_EQ(row.excluded, 0);
      EXPECT_NEAR(row.mse, sq / n, 1e-12);
      EXPECT_NEAR(row.std, std::sqrt((sum_sq - sum * sum / n) / (n - 1)), 1e-9);
    }
  }
  // Edge-only models make SE and MPLE the same estimator.
  EXPECT_NEAR(result.summary.find("SE", "W1").mse, result.summary.find("MPLE", "W1").mse, 1e-9);
}

TEST(ExperimentTest, DeterministicOutputs) {
  RunConfig config = parse_run_config(kSmallConfig);
  const ExperimentResult a = run_experiment(config);
  config.threads = 1;
  const ExperimentResult b = run_experiment(config);
  std::ostringstream sa;
  std::ostringstream sb;
  write_summary_csv(sa, a.summary);
  write_summary_csv(sb, b.summary);
  EXPECT_EQ(sa.str(), sb.str());
  std::ostringstream ra;
  std::ostringstream rb;
  write_replicates_csv(ra, a);
  write_replicates_csv(rb, b);
  EXPECT_EQ(ra.str(), rb.str());
}

TEST(ExperimentTest, WritesCsvFiles) {
  const ExperimentResult result = run_experiment(parse_run_config(kSmallConfig));
  const auto dir = std::filesystem::temp_directory_path() / "lergm_experiment_test";
  std::filesystem::remove_all(dir);
  write_experiment(dir, result);
  auto slurp = [&](const char* name) {
    std::ifstream in(dir / name);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const std::string summary = slurp("summary.csv");
  const std::string replicates = slurp("replicates.csv");
  const std::string timings = slurp("timings.csv");
  EXPECT_EQ(first_line(summary), "estimator,param,true,mse,std,included,excluded");
  EXPECT_EQ(first_line(replicates), "replicate,estimator,param,value,converged");
  EXPECT_EQ(first_line(timings), "replicate,estimator,seconds,error");
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 5);
  EXPECT_EQ(std::count(replicates.begin(), replicates.end(), '\n'), 1 + 8 * 2 * 2);
  std::filesystem::remove_all(dir);
}

TEST(ExperimentTest, SummaryHandlesExclusions) {
  ReplicateRecord good;
  good.stein = EstimationResult{};
  good.stein->estimate = {Eigen::VectorXd::Constant(1, 2.0), Eigen::VectorXd()};
  good.stein->converged = true;
  ReplicateRecord bad = good;
  bad.stein->converged = false;
  ReplicateRecord failed;
  failed.error = "boom";
  const ParameterVector truth{Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd()};
  const SummaryTable t = summarize({good, bad, failed}, truth, {"W1"}, false);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0].included, 1);
  EXPECT_EQ(t.rows[0].excluded, 2);
  EXPECT_EQ(t.rows[0].mse, 1.0);
  EXPECT_TRUE(std::isnan(t.rows[0].std));
  EXPECT_THROW(t.find("MPLE", "W1"), ArgumentError);
}

TEST(FormatDoubleTest, RoundTrips) {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 123456789.125}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

}  // namespace
}  // namespace lergm
