#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pcst/verify.hpp"

using namespace pcst;

namespace {

Instance triangle()
{
  Instance inst = make_instance(3, 1.0, "triangle");
  inst.add_edge(0, 1, 1.0);
  inst.add_edge(1, 2, 1.5);
  inst.add_edge(0, 2, 2.0);
  inst.prizes = {0.2, 1.4, 2.5};
  return inst;
}

// Unreinforced fixed point with unbounded depth.
SolverConfig exact_config(int n)
{
  SolverConfig cfg;
  cfg.rho = 0;
  cfg.cost_noise = 0;
  cfg.depth_bound = n;
  cfg.max_sweeps = 5000;
  return cfg;
}

}  // namespace

TEST(CompTree, TriangleRadiusTwo)
{
  const CompTree ct = computation_tree(triangle(), 0, 2);
  // center, two walks of length 1, one continuation each
  EXPECT_EQ(ct.size(), 5);
  EXPECT_EQ(ct.proj[0], 0);
  EXPECT_EQ(ct.degree(0), 2);
  EXPECT_TRUE(locally_isomorphic(triangle(), ct));
  for (int x = 0; x < ct.size(); ++x)
    EXPECT_LE(ct.level[x], 2);
}

TEST(CompTree, TreeInputGivesCopy)
{
  const Instance inst = oracles::random_tree(10, 1.0, 4);
  const CompTree ct = computation_tree(inst, 3, 20);
  EXPECT_EQ(ct.size(), 10);
  std::vector<int> seen(10, 0);
  for (node v : ct.proj)
    ++seen[v];
  for (int k : seen)
    EXPECT_EQ(k, 1);
  EXPECT_EQ(ct.directed_edge_count(), 18);
}

TEST(CompTree, RadiusOneIsStar)
{
  const Instance inst = oracles::random_connected(8, 3, 1.0, 2);
  const CompTree ct = computation_tree(inst, 5, 1);
  EXPECT_EQ(ct.size(), Graph(inst).degree(5) + 1);
  for (int x = 1; x < ct.size(); ++x) {
    EXPECT_EQ(ct.up[x], 0);
    EXPECT_EQ(ct.degree(x), 1);
  }
}

TEST(CompTree, LocallyIsomorphicAndCosts)
{
  const Instance inst = oracles::random_connected(7, 3, 1.0, 9);
  const CompTree ct = computation_tree(inst, 0, 4);
  EXPECT_TRUE(locally_isomorphic(inst, ct));
  const Graph g(inst);
  for (int e = 0; e < ct.directed_edge_count(); ++e)
    EXPECT_EQ(ct.cost[e], edge_cost(g, ct.proj[ct.owner(e)], ct.proj[ct.nbr[e]]));
}

TEST(CompTree, Guards)
{
  EXPECT_THROW(computation_tree(triangle(), 0, 0), Error);
  EXPECT_THROW(computation_tree(triangle(), 3, 2), Error);
  EXPECT_THROW(computation_tree(oracles::random_connected(10, 4, 1.0, 0), 0, 30, 1000), Error);
}

TEST(Lifting, P3FixedPoint)
{
  const Instance inst = oracles::p3();
  const RootedRun run = solve_rooted(inst, 0, exact_config(3));
  ASSERT_TRUE(run.stats.converged);
  const CompTree ct = computation_tree(inst, 0, 3);
  const LiftReport rep = check_lifted_fixed_point(run.state, ct, 1e-9);
  EXPECT_TRUE(rep.ok) << rep.error;
  EXPECT_EQ(rep.max_residual, 0.0);
  EXPECT_GT(rep.checked_edges, 0);
}

TEST(Lifting, TriangleFixedPoint)
{
  const Instance inst = triangle();
  const RootedRun run = solve_rooted(inst, 0, exact_config(3));
  ASSERT_TRUE(run.stats.converged);
  for (node v = 0; v < 3; ++v) {
    const CompTree ct = computation_tree(inst, v, 4);
    const LiftReport rep = check_lifted_fixed_point(run.state, ct, 1e-9);
    EXPECT_TRUE(rep.ok) << rep.error;
    EXPECT_LE(rep.max_residual, 1e-9);
    EXPECT_GT(rep.exempt_edges, 0);
  }
}

TEST(Lifting, DetectsPerturbedMessage)
{
  const Instance inst = triangle();
  const RootedRun run = solve_rooted(inst, 0, exact_config(3));
  const CompTree ct = computation_tree(inst, 1, 4);
  LiftedMessages m = lift_messages(run.state, ct);
  ASSERT_LE(lifted_residual(ct, m, 0, run.state.exclusion_costs()).max_residual, 1e-9);
  // a message into the center from a non-root neighbor feeds an interior check
  int target = -1;
  for (int e = ct.offset[0]; e < ct.offset[1]; ++e) {
    const int y = ct.nbr[e];
    if (ct.proj[y] != 0)
      target = ct.slot(y, 0);
  }
  ASSERT_GE(target, 0);
  for (real& v : m.a(target))
    if (v != kNegInf) {
      v += 0.1;
      break;
    }
  EXPECT_GE(lifted_residual(ct, m, 0, run.state.exclusion_costs()).max_residual, 0.1 - 1e-12);
}

TEST(Lifting, RejectsUnconvergedState)
{
  const Instance inst = oracles::random_connected(8, 3, 1.5, 3);
  SolverConfig cfg = exact_config(8);
  cfg.max_sweeps = 1;
  const RootedRun run = solve_rooted(inst, 0, cfg);
  const LiftReport rep = check_lifted_fixed_point(run.state, computation_tree(inst, 0, 3), 1e-9);
  EXPECT_FALSE(rep.ok);
  EXPECT_FALSE(rep.error.empty());
}

TEST(Corollaries, P3)
{
  const Instance inst = oracles::p3();
  const RootedRun run = solve_rooted(inst, 0, exact_config(3));
  const CorollaryReport rep = check_optimality_corollaries(inst, run.final_solution, run.state);
  ASSERT_TRUE(rep.preconditions_met) << rep.precondition_failure;
  EXPECT_TRUE(rep.all_pass());
  EXPECT_TRUE(rep.oracle.evaluated);
  EXPECT_DOUBLE_EQ(rep.oracle.observed, 3.0);
}

TEST(Corollaries, LargeLambdaSpansWithMst)
{
  // plain iteration need not converge on loopy graphs; only fixed points count
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Instance inst = oracles::random_connected(9, 3, 1.0, seed);
    real min_b = kPosInf;
    for (real& b : inst.prizes) {
      b += 0.1;
      min_b = std::min(min_b, b);
    }
    inst.lambda = 2 * inst.total_edge_cost() / min_b;
    const RootedRun run = solve_rooted(inst, 0, exact_config(9));
    if (!run.stats.converged)
      continue;
    ++checked;
    EXPECT_EQ(run.final_solution.size(), 9);
    EXPECT_NEAR(run.final_solution.cost, oracles::mst_weight(inst), 1e-9);
    const CorollaryReport rep = check_optimality_corollaries(inst, run.final_solution, run.state);
    ASSERT_TRUE(rep.preconditions_met) << rep.precondition_failure;
    EXPECT_TRUE(rep.all_pass()) << to_json(rep).dump();
    EXPECT_TRUE(rep.oracle.evaluated);
  }
  EXPECT_GE(checked, 5);
}

TEST(Corollaries, ReinforcedRunIsNotEligible)
{
  const Instance inst = oracles::random_connected(10, 3, 1.5, 1);
  SolverConfig cfg = exact_config(10);
  cfg.rho = 0.05;
  cfg.stable_sweeps = 2;
  const RootedRun run = solve_rooted(inst, 0, cfg);
  if (run.state.gamma == 0)
    GTEST_SKIP() << "run converged before reinforcement";
  const CorollaryReport rep = check_optimality_corollaries(inst, run.final_solution, run.state);
  EXPECT_FALSE(rep.preconditions_met);
  EXPECT_FALSE(rep.all_pass());
}

TEST(Corollaries, FixedPointBeatsSubtreesOfItsVertexSet)
{
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = oracles::random_connected(10, 2.5, 1.5, seed);
    const RootedRun run = solve_rooted(inst, 0, exact_config(10));
    if (!run.stats.converged)
      continue;
    const Solution& sol = run.final_solution;
    EXPECT_LE(sol.cost, best_subtree_within(inst, sol).cost + 1e-9) << seed;
  }
}
