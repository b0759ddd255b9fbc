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


#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lergm/errors.hpp"
#include "lergm/statistics.hpp"
#include "test_util.hpp"

namespace lergm {
namespace {

const double kE1 = std::exp(-1.0);

ModelSpec gwd_only(std::vector<int> blocks) {
  BlockPartition p(std::move(blocks));
  const int m = p.max_block_size();
  std::vector<StatisticSpec> between;
  if (p.num_blocks() > 1) {
    between.push_back(
        StatisticSpec::bipartite_weighted_degree(1, geometric_weights(1.0, m + 1), "gwd1"));
  }
  return ModelSpec(p, {StatisticSpec::weighted_degree(geometric_weights(1.0, m + 1), "gwd")},
                   std::move(between));
}

// Every kind the library offers, on a partition with within and between pairs.
ModelSpec all_kinds_model(std::vector<int> blocks) {
  BlockPartition p(std::move(blocks));
  const int len = p.max_block_size() + 1;
  return ModelSpec(p,
                   {StatisticSpec::edges(),
                    StatisticSpec::weighted_degree(geometric_weights(0.7, len), "gwd"),
                    StatisticSpec::weighted_degree(pochhammer_weights(1, 2, len), "poch")},
                   {StatisticSpec::edges(),
                    StatisticSpec::weighted_degree(geometric_weights(1.3, len), "gwd"),
                    StatisticSpec::bipartite_weighted_degree(1, geometric_weights(1.0, len), "b1"),
                    StatisticSpec::bipartite_weighted_degree(2, pochhammer_weights(2, 1, len),
                                                             "b2")});
}

TEST(WeightTablesTest, Generators) {
  const auto g = geometric_weights(1.0, 4);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_DOUBLE_EQ(g[0], 1.0);
  EXPECT_DOUBLE_EQ(g[3], std::exp(-3.0));
  const auto p = pochhammer_weights(2, 3, 3);
  EXPECT_DOUBLE_EQ(p[0], 1.0 / (2 * 3 * 4));
  EXPECT_DOUBLE_EQ(p[2], 1.0 / (4 * 5 * 6));
  EXPECT_THROW(geometric_weights(0.0, 4), ArgumentError);
  EXPECT_THROW(pochhammer_weights(0, 1, 4), ArgumentError);
}

TEST(StatisticSpecTest, MonotonicityFromTable) {
  EXPECT_EQ(StatisticSpec::edges().monotonicity(), Monotonicity::kIncreasing);
  EXPECT_EQ(StatisticSpec::weighted_degree(geometric_weights(1, 5), "g").monotonicity(),
            Monotonicity::kDecreasing);
  EXPECT_EQ(StatisticSpec::weighted_degree({0, 1, 2}, "up").monotonicity(),
            Monotonicity::kIncreasing);
  EXPECT_EQ(StatisticSpec::weighted_degree({0, 1, 1}, "flat").monotonicity(),
            Monotonicity::kNone);
  EXPECT_THROW(StatisticSpec::bipartite_weighted_degree(3, {1, 2}, "bad"), ArgumentError);
}

TEST(ParseStatisticTest, KnownNames) {
  EXPECT_EQ(parse_statistic("edges", 5).kind(), StatisticKind::kEdges);
  const auto gwd = parse_statistic("gwd(1)", 5);
  EXPECT_EQ(gwd.kind(), StatisticKind::kWeightedDegree);
  EXPECT_EQ(gwd.weights().size(), 6u);
  EXPECT_DOUBLE_EQ(gwd.weight(2), std::exp(-2.0));
  const auto bip = parse_statistic("gwd_bipartite(2, 0.5)", 5);
  EXPECT_EQ(bip.kind(), StatisticKind::kBipartiteWeightedDegree);
  EXPECT_EQ(bip.side(), 2);
  EXPECT_DOUBLE_EQ(bip.weight(1), std::exp(-0.5));
  EXPECT_DOUBLE_EQ(parse_statistic("poch(1,2)", 5).weight(1), 1.0 / 6.0);
}

TEST(ParseStatisticTest, RejectsUnknownOrMalformed) {
  for (const char* text : {"triangle", "gwd", "gwd(1", "gwd(a)", "poch(1)", "edges(2)"}) {
    EXPECT_THROW(parse_statistic(text, 5), ParseError) << text;
  }
}

TEST(ModelSpecTest, RejectsInvalidModels) {
  const BlockPartition p({3, 3});
  EXPECT_THROW(ModelSpec(p, {StatisticSpec::bipartite_weighted_degree(1, {1, 0.5, 0.2, 0.1}, "b")},
                         {}),
               ArgumentError);
  EXPECT_THROW(ModelSpec(p, {StatisticSpec::weighted_degree({1, 0.5}, "short")}, {}),
               ArgumentError);
  // A single 2-vertex block has one label, so two within statistics break (i).
  EXPECT_THROW(ModelSpec(BlockPartition({2}),
                         {StatisticSpec::edges(), StatisticSpec::edges()}, {}),
               ArgumentError);
}

TEST(EvalStatisticTest, SpecExamples) {
  LergmGraph g(BlockPartition({3}));
  g.set_edge({{0, 0}, 0, 1}, true);
  const ModelSpec edges(g.partition(), {StatisticSpec::edges()}, {});
  EXPECT_DOUBLE_EQ(eval_statistic(edges, g, {0, 0})[0], 1.0);
  EXPECT_NEAR(eval_statistic(gwd_only({3}), g, {0, 0})[0], 2 * kE1 + 1, 1e-15);
  EXPECT_NEAR(2 * kE1 + 1, 1.7358, 1e-4);

  LergmGraph b(BlockPartition({2, 2}));
  b.set_edge({{0, 1}, 0, 0}, true);
  EXPECT_NEAR(eval_statistic(gwd_only({2, 2}), b, {0, 1})[0], kE1 + 1, 1e-15);
}

TEST(ChangeStatisticTest, EdgesIsOne) {
  std::mt19937_64 rng(5);
  const ModelSpec spec = testing::edges_model({4, 3});
  const LergmGraph g = testing::random_graph(spec.partition(), 0.5, rng);
  for (const BlockPair& pair : spec.partition().all_pairs()) {
    for (const auto& m : enumerate_edge_labels(spec.partition(), pair)) {
      EXPECT_EQ(change_statistic(spec, g, m)[0], 1.0);
    }
  }
}

TEST(ChangeStatisticTest, WeightedDegreeExample) {
  LergmGraph g(BlockPartition({3}));
  g.set_edge({{0, 0}, 0, 1}, true);
  const double delta = change_statistic(gwd_only({3}), g, {{0, 0}, 0, 2})[0];
  // Vertex 1 goes from degree 1 to 2 and vertex 3 from 0 to 1.
  const double by_formula = (std::exp(-2.0) - kE1) + (kE1 - 1.0);
  const double by_two_evals =
      eval_statistic(gwd_only({3}), toggle_edge(g, {{0, 0}, 0, 2}, true), {0, 0})[0] -
      eval_statistic(gwd_only({3}), g, {0, 0})[0];
  EXPECT_NEAR(delta, by_formula, 1e-15);
  EXPECT_NEAR(delta, by_two_evals, 1e-15);
  EXPECT_NEAR(delta, -0.8647, 1e-4);
}

// Statistics and change statistics against the brute-force oracle.
TEST(ChangeStatisticProperty, MatchesBruteForce) {
  std::mt19937_64 rng(6);
  const ModelSpec spec = all_kinds_model({6, 4, 5});
  const BlockPartition& p = spec.partition();
  for (int trial = 0; trial < 100; ++trial) {
    const LergmGraph g = testing::random_graph(p, 0.1 + 0.8 * (trial % 10) / 9.0, rng);
    for (const BlockPair& pair : p.all_pairs()) {
      const auto stats = spec.stats_for(pair);
      const Eigen::VectorXd s = eval_statistic(spec, g, pair);
      ASSERT_LT((s - testing::brute_statistics(stats, g.subgraph(pair))).norm(), 1e-12);
      for (const auto& m : enumerate_edge_labels(p, pair)) {
        const Eigen::VectorXd up =
            testing::brute_statistics(stats, toggle_edge(g, m, true).subgraph(pair));
        const Eigen::VectorXd down =
            testing::brute_statistics(stats, toggle_edge(g, m, false).subgraph(pair));
        ASSERT_LT((change_statistic(spec, g, m) - (up - down)).lpNorm<Eigen::Infinity>(), 1e-12);
        const Eigen::VectorXd removal =
            testing::brute_statistics(stats, g.subgraph(pair)) - down;
        ASSERT_LT((removal_difference(spec, g, m) - removal).lpNorm<Eigen::Infinity>(), 1e-12);
      }
    }
  }
}

TEST(RemovalDifferenceTest, AbsentPresentAndSign) {
  std::mt19937_64 rng(7);
  const ModelSpec spec = testing::edge_gwd_model({5, 5});
  const LergmGraph g = testing::random_graph(spec.partition(), 0.5, rng);
  for (const BlockPair& pair : spec.partition().all_pairs()) {
    for (const auto& m : enumerate_edge_labels(spec.partition(), pair)) {
      const Eigen::VectorXd r = removal_difference(spec, g, m);
      if (!g.edge(m)) {
        EXPECT_TRUE(r.isZero(0.0));
        continue;
      }
      EXPECT_EQ(r[0], 1.0);
      for (Eigen::Index i = 1; i < r.size(); ++i) EXPECT_LT(r[i], 0.0);
      EXPECT_TRUE((r - change_statistic(spec, g, m)).isZero(0.0));
    }
  }
}

TEST(GrowthConstantTest, SpecExamples) {
  const BlockPartition p({6, 6});
  EXPECT_DOUBLE_EQ(growth_constant(std::vector{StatisticSpec::edges()}, p, true), 1.0);
  const auto gwd = StatisticSpec::weighted_degree(geometric_weights(1.0, 7), "gwd");
  const double one = 2 * (1 - kE1);
  EXPECT_NEAR(growth_constant(std::vector{gwd}, p, true), one, 1e-15);
  EXPECT_NEAR(one, 1.2642, 1e-4);
  EXPECT_NEAR(growth_constant(std::vector{StatisticSpec::edges(), gwd}, p, true),
              std::sqrt(1 + one * one), 1e-15);
  const GrowthConstants gc = growth_constants(testing::edge_gwd_model({6, 6}));
  EXPECT_EQ(gc.c_within, 0.0);
  EXPECT_EQ(gc.c_between, 0.0);
  EXPECT_NEAR(gc.l_within, std::sqrt(1 + one * one), 1e-15);
}

TEST(GrowthConstantProperty, BoundsChangeStatistics) {
  std::mt19937_64 rng(8);
  const ModelSpec spec = all_kinds_model({7, 3, 5});
  const GrowthConstants gc = growth_constants(spec);
  const BlockPartition& p = spec.partition();
  const auto pairs = p.all_pairs();
  std::uniform_int_distribution<std::size_t> pick_pair(0, pairs.size() - 1);
  std::uniform_real_distribution<double> density(0.0, 1.0);
  for (int probe = 0; probe < 1000; ++probe) {
    const LergmGraph g = testing::random_graph(p, density(rng), rng);
    const BlockPair pair = pairs[pick_pair(rng)];
    const auto labels = enumerate_edge_labels(p, pair);
    std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);
    const double bound = pair.within() ? gc.l_within : gc.l_between;
    ASSERT_LE(change_statistic(spec, g, labels[pick(rng)]).norm(), bound * (1 + 1e-12));
  }
}

// With o = 1 the weighted degree counts vertices: sum_i H_i = |A_k|.
TEST(DegreeSequenceProperty, CountsVertices) {
  std::mt19937_64 rng(9);
  const BlockPartition p({6, 4});
  const std::vector<double> ones(7, 1.0);
  const ModelSpec spec(p, {StatisticSpec::weighted_degree(ones, "count")},
                       {StatisticSpec::bipartite_weighted_degree(1, ones, "h1"),
                        StatisticSpec::bipartite_weighted_degree(2, ones, "h2")});
  LergmGraph g = testing::random_graph(p, 0.5, rng);
  for (int step = 0; step < 200; ++step) {
    for (const BlockPair& pair : p.all_pairs()) {
      const auto labels = enumerate_edge_labels(p, pair);
      g.set_edge(labels[static_cast<std::size_t>(step) % labels.size()], step % 3 != 0);
    }
    EXPECT_EQ(eval_statistic(spec, g, {0, 0})[0], 6.0);
    EXPECT_EQ(eval_statistic(spec, g, {1, 1})[0], 4.0);
    EXPECT_EQ(eval_statistic(spec, g, {0, 1}), Eigen::Vector2d(6.0, 4.0));
  }
}

TEST(PredictorTableProperty, ReproducesLinearPredictor) {
  std::mt19937_64 rng(10);
  const ModelSpec spec = all_kinds_model({6, 4});
  for (int trial = 0; trial < 20; ++trial) {
    const LergmGraph g = testing::random_graph(spec.partition(), 0.5, rng);
    for (const BlockPair& pair : spec.partition().all_pairs()) {
      const auto stats = spec.stats_for(pair);
      const Eigen::VectorXd beta =
          testing::random_beta(static_cast<int>(stats.size()), -2, 2, rng);
      const Subgraph& sg = g.subgraph(pair);
      const PredictorTable t = make_predictor_table(stats, beta, sg);
      sg.for_each_label([&](int u, int v) {
        const int x = sg.has(u, v) ? 1 : 0;
        const double eta = t.constant + t.row[static_cast<std::size_t>(sg.row_degree(u) - x)] +
                           t.col[static_cast<std::size_t>(sg.col_degree(v) - x)];
        Eigen::VectorXd delta(stats.size());
        change_statistic_into(stats, sg, u, v, delta.data());
        ASSERT_NEAR(eta, beta.dot(delta), 1e-12);
      });
    }
  }
}

}  // namespace
}  // namespace lergm
