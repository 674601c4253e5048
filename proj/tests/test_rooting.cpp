#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "pcst/oracle.hpp"
#include "pcst/rooting.hpp"

using namespace pcst;

TEST(Augment, P3)
{
  const Instance inst = oracles::p3();
  auto [aug, mu] = augment_virtual_root(inst);
  EXPECT_DOUBLE_EQ(mu, 7.5);
  EXPECT_EQ(aug.node_count, 4);
  EXPECT_EQ(aug.edge_count(), 5);
  EXPECT_EQ(Graph(aug).degree(3), 3);
  EXPECT_EQ(aug.prizes[3], 0.0);
}

TEST(Augment, KeepsOriginalData)
{
  const Instance inst = oracles::random_connected(9, 3, 1.3, 5);
  auto [aug, mu] = augment_virtual_root(inst, 100.0);
  EXPECT_EQ(mu, 100.0);
  EXPECT_EQ(aug.node_count, inst.node_count + 1);
  EXPECT_EQ(aug.edge_count(), inst.edge_count() + inst.node_count);
  EXPECT_EQ(aug.lambda, inst.lambda);
  for (node v = 0; v < inst.node_count; ++v)
    EXPECT_EQ(aug.prizes[v], inst.prizes[v]);
  for (int k = 0; k < inst.edge_count(); ++k) {
    EXPECT_EQ(aug.edges[k].u, inst.edges[k].u);
    EXPECT_EQ(aug.edges[k].v, inst.edges[k].v);
    EXPECT_EQ(aug.edges[k].cost_uv, inst.edges[k].cost_uv);
  }
}

TEST(Augment, EmptyEdgeSetBecomesStar)
{
  Instance inst = make_instance(4, 1.0);
  auto [aug, mu] = augment_virtual_root(inst);
  EXPECT_DOUBLE_EQ(mu, 1.0);
  EXPECT_EQ(aug.edge_count(), 4);
  for (const auto& e : aug.edges)
    EXPECT_EQ(e.v, 4);
}

TEST(RootScores, P3ReachesBestPerRootCost)
{
  const Instance inst = oracles::p3();
  SolverConfig cfg;
  real best = kPosInf;
  for (node r = 0; r < 3; ++r)
    best = std::min(best, solve_rooted(inst, r, cfg).solution.cost);
  PcstRun run = solve_pcst(inst, cfg);
  ASSERT_TRUE(run.scores);
  EXPECT_EQ(run.scores->alpha.size(), 3u);
  EXPECT_DOUBLE_EQ(run.solution.cost, best);
  // the best tree is b alone; rooted at r = 0 the optimum is the full path
  EXPECT_DOUBLE_EQ(best, exact_pcst(inst).cost);
  EXPECT_DOUBLE_EQ(best, 0.5);
  EXPECT_EQ(run.solution.vertex_set(), std::vector<node>{2});
}

TEST(RootScores, AlphaOnTreesPricesEachRoot)
{
  // on a tree the selection solve is exact, so alpha differences are
  // differences of the per-root optima
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Instance inst = oracles::random_tree(9, 1.0, seed);
    auto [aug, mu] = augment_virtual_root(inst);
    SolverConfig cfg;
    cfg.cost_noise = 0;
    cfg.depth_bound = inst.node_count + 1;
    RootedRun sel = solve_rooted(aug, inst.node_count, cfg);
    RootScores sc = root_scores(sel.fields, inst.node_count, mu);
    for (node j = 0; j < inst.node_count; ++j) {
      const real d_alpha = sc.alpha[j] - sc.alpha[0];
      const real d_opt = oracles::tree_optimum_rooted(inst, j) - oracles::tree_optimum_rooted(inst, 0);
      EXPECT_NEAR(d_alpha, d_opt, 1e-9) << seed << " " << j;
    }
  }
}

TEST(RootScores, SingleNode)
{
  Instance inst = make_instance(1, 1.0);
  inst.prizes[0] = 2;
  PcstRun run = solve_pcst(inst, SolverConfig{});
  EXPECT_EQ(run.root, 0);
  EXPECT_EQ(run.solution.cost, 0.0);

  auto [aug, mu] = augment_virtual_root(inst);
  RootedRun sel = solve_rooted(aug, 1, SolverConfig{});
  RootScores sc = root_scores(sel.fields, 1, mu);
  EXPECT_EQ(sc.alpha.size(), 1u);
  EXPECT_EQ(sc.best_root, 0);
}

TEST(RootScores, TieGoesToLowestIndex)
{
  Instance inst = make_instance(2, 1.0);
  inst.add_edge(0, 1, 1.0);
  inst.prizes = {0.5, 0.5};
  auto [aug, mu] = augment_virtual_root(inst);
  SolverConfig cfg;
  cfg.cost_noise = 0;
  cfg.noise_eps = 0;
  RootedRun sel = solve_rooted(aug, 2, cfg);
  RootScores sc = root_scores(sel.fields, 2, mu);
  EXPECT_EQ(sc.alpha[0], sc.alpha[1]);
  EXPECT_EQ(sc.best_root, 0);
  EXPECT_EQ(sc.ranking(), (std::vector<node>{0, 1}));
}

TEST(SolvePcst, ZeroLambdaIsEmpty)
{
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Instance inst = oracles::random_connected(10, 3, 0.0, seed);
    PcstRun run = solve_pcst(inst, SolverConfig{});
    EXPECT_EQ(run.solution.cost, 0.0);
    EXPECT_EQ(run.solution.size(), 1);
  }
}

TEST(SolvePcst, P3WithFixedRoot)
{
  PcstOptions opt;
  opt.root = 0;
  PcstRun run = solve_pcst(oracles::p3(), SolverConfig{}, opt);
  EXPECT_DOUBLE_EQ(run.solution.cost, 3.0);
  EXPECT_FALSE(run.scores);
}

TEST(SolvePcst, LargePrizeShortCircuits)
{
  Instance inst = oracles::random_connected(8, 3, 1.0, 2);
  inst.prizes[1] = inst.total_edge_cost() + 1;
  PcstRun run = solve_pcst(inst, SolverConfig{});
  EXPECT_TRUE(run.short_circuit);
  EXPECT_EQ(run.root, 1);
  EXPECT_FALSE(run.scores);
  EXPECT_EQ(run.selection_stats.sweeps_used, 0);
}

TEST(SolvePcst, MatchesBestRootAndNeverBeatsOptimum)
{
  pcst::Rng rng(2024);
  int matched = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const int n = static_cast<int>(rng.uniform_int(4, 12));
    const real nu = rng.uniform(1.5, 3.5);
    const real lambda = rng.uniform(0.5, 3.0);
    const Instance inst = oracles::random_connected(n, nu, lambda, rng.next());
    SolverConfig cfg;
    real best = kPosInf;
    for (node r = 0; r < n; ++r)
      best = std::min(best, solve_rooted(inst, r, cfg).solution.cost);
    const real got = solve_pcst(inst, cfg).solution.cost;
    matched += std::abs(got - best) <= 1e-9;
    EXPECT_GE(got, exact_pcst(inst).cost - 1e-9);
  }
  EXPECT_GE(matched, 190) << matched << " of " << trials;
}

TEST(SolvePcst, SingleCandidateIsTheBestAlphaRoot)
{
  const Instance inst = oracles::random_connected(10, 3, 1.5, 8);
  PcstOptions opt;
  opt.root_candidates = 1;
  PcstRun run = solve_pcst(inst, SolverConfig{}, opt);
  ASSERT_TRUE(run.scores);
  EXPECT_EQ(run.root, run.scores->best_root);
}
