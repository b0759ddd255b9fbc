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


#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace lergm::cli {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "lergm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lergm_cli_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    config_ = write("config.json", R"json({
      "blocks": [4, 3],
      "model": {"within": ["edges", "gwd(1)"],
                "between": ["edges", "gwd_bipartite(1,1)", "gwd_bipartite(2,1)"]},
      "true_beta": {"within": [0.5, -1], "between": [0.2, -0.5, -0.5]},
      "sampler": {"burn_in": 20, "thinning": 2},
      "replicates": 3, "seed": 5, "threads": 1,
      "output_dir": ")json" + (dir_ / "out").string() + R"json("
    })json");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
  std::string config_;
};

TEST_F(CliTest, HelpAndUsageErrors) {
  EXPECT_EQ(run({"--help"}).code, kExitOk);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"estimate", "--config", config_}).code, kExitUsage);  // missing --graph
  EXPECT_EQ(run({"sample", "--config", config_, "--bogus"}).code, kExitUsage);
  EXPECT_EQ(run({"sample", "--config", (dir_ / "missing.json").string()}).code, kExitUsage);
  const CliRun bad_beta = run({"sample", "--config", config_, "--beta", "1,2"});
  EXPECT_EQ(bad_beta.code, kExitUsage);
  EXPECT_FALSE(bad_beta.err.empty());
  EXPECT_EQ(run({"sample", "--config", config_, "--beta", "1,x,0,0,0"}).code, kExitUsage);
  const std::string broken = write("broken.json", "{\"blocks\": [3]");
  EXPECT_EQ(run({"simulate", "--config", broken}).code, kExitUsage);
}

TEST_F(CliTest, SampleEstimateCheckRoundTrip) {
  const CliRun s = run({"sample", "--config", config_, "--count", "2"});
  ASSERT_EQ(s.code, kExitOk) << s.err;
  const fs::path graph = dir_ / "out" / "graph_0001.txt";
  ASSERT_TRUE(fs::exists(graph));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "graph_0002.txt"));
  EXPECT_NE(s.out.find("graph_0002.txt"), std::string::npos);

  const fs::path csv = dir_ / "est.csv";
  const CliRun e = run({"estimate", "--config", config_, "--graph", graph.string(), "--mple", "--out",
                     csv.string()});
  ASSERT_EQ(e.code, kExitOk) << e.err;
  EXPECT_NE(e.out.find("estimator=SE"), std::string::npos);
  EXPECT_NE(e.out.find("estimator=MPLE"), std::string::npos);
  EXPECT_NE(e.out.find("beta_B3="), std::string::npos);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header,
            "estimator,converged,iterations,final_grad_norm,final_objective_w,final_objective_b,"
            "hessian_min_eig_w,hessian_min_eig_b,on_boundary,beta_W1,beta_W2,beta_B1,beta_B2,"
            "beta_B3");

  const CliRun c = run({"check-assumptions", "--config", config_, "--graph", graph.string()});
  ASSERT_EQ(c.code, kExitOk) << c.err;
  EXPECT_NE(c.out.find("(i)"), std::string::npos);
  EXPECT_NE(c.out.find("overall="), std::string::npos);
}

TEST_F(CliTest, SeedOverrideIsDeterministic) {
  auto contents = [&](const std::string& seed) {
    EXPECT_EQ(run({"sample", "--config", config_, "--seed", seed}).code, kExitOk);
    std::ifstream in(dir_ / "out" / "graph_0001.txt");
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  };
  EXPECT_EQ(contents("9"), contents("9"));
}

TEST_F(CliTest, SteinCheckExactPassesAndToleranceFails) {
  const CliRun ok = run({"stein-check", "--config", config_, "--exact"});
  EXPECT_EQ(ok.code, kExitOk) << ok.out << ok.err;
  EXPECT_NE(ok.out.find("subgraph (1,1)"), std::string::npos);
  EXPECT_NE(ok.out.find("subgraph (1,2)"), std::string::npos);
  EXPECT_NE(ok.out.find("max_residual_inf="), std::string::npos);
  const CliRun strict = run({"stein-check", "--config", config_, "--samples", "50", "--tol", "1e-30"});
  EXPECT_EQ(strict.code, kExitModel);
}

TEST_F(CliTest, SimulateWritesTables) {
  const CliRun r = run({"simulate", "--config", config_});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "out" / "summary.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "replicates.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "timings.csv"));
}

TEST_F(CliTest, DiagnoseWritesTables) {
  const std::string cfg = write("diag.json", R"json({
    "blocks": {"count": 4, "size": 4},
    "model": {"within": ["edges"], "between": ["edges"]},
    "true_beta": {"within": [0.3], "between": [-0.3]},
    "sampler": {"burn_in": 5, "thinning": 1},
    "replicates": 20, "seed": 2, "threads": 1
  })json");
  const fs::path out = dir_ / "diag";
  const CliRun r = run({"diagnose", "--config", cfg, "--out", out.string(), "--p", "2,4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* name : {"moments.csv", "concentration.csv", "normality.csv",
                           "normality_plot.csv", "wasserstein.csv"}) {
    EXPECT_TRUE(fs::exists(out / name)) << name;
  }
  std::ifstream in(out / "concentration.csv");
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 3);
  EXPECT_EQ(run({"diagnose", "--config", cfg, "--out", out.string(), "--p", "0"}).code,
            kExitUsage);
}

}  // namespace
}  // namespace lergm::cli
