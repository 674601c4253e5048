#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pcst/maxsum.hpp"
#include "pcst/postprocess.hpp"

using namespace pcst;

namespace {

Tree full_path_tree()
{
  Tree t = single_node_tree(3, 0);
  t.parent[1] = 0;
  t.parent[2] = 1;
  return t;
}

}  // namespace

TEST(StrongPrune, KeepsP3Path)
{
  // W(b) = 3 > c(a,b) = 2, W(a) = 0.5 + 1 = 1.5 > c(r,a) = 1
  const Instance inst = oracles::p3();
  const Tree t = full_path_tree();
  const Tree pruned = strong_prune(inst, t);
  EXPECT_EQ(pruned.parent, t.parent);
  EXPECT_DOUBLE_EQ(tree_cost(inst, pruned), 3.0);
}

TEST(StrongPrune, CutsZeroPrizeLeaf)
{
  Instance inst = oracles::p3();
  inst.prizes[2] = 0;
  const Tree pruned = strong_prune(inst, full_path_tree());
  EXPECT_FALSE(pruned.contains(2));
  EXPECT_FALSE(pruned.contains(1));  // 0.5 does not pay for c = 1 either
  EXPECT_EQ(pruned.vertices(), std::vector<node>{0});
}

TEST(StrongPrune, CutsBranchThatDoesNotPay)
{
  Instance inst = oracles::p3();
  inst.prizes[2] = 1.5;  // W(b) - c = -0.5
  const Tree pruned = strong_prune(inst, full_path_tree());
  EXPECT_FALSE(pruned.contains(2));
  EXPECT_FALSE(pruned.contains(1));
  inst.prizes[1] = 2;  // a alone now pays for its edge
  const Tree again = strong_prune(inst, full_path_tree());
  EXPECT_TRUE(again.contains(1));
  EXPECT_FALSE(again.contains(2));
}

TEST(StrongPrune, SingleNodeUnchanged)
{
  const Instance inst = oracles::p3();
  const Tree t = single_node_tree(3, 1);
  EXPECT_EQ(strong_prune(inst, t).parent, t.parent);
}

TEST(StrongPrune, RejectsInvalidTree)
{
  Tree t = single_node_tree(3, 0);
  t.parent[2] = 0;  // no edge 0-2
  EXPECT_THROW(strong_prune(oracles::p3(), t), Error);
}

TEST(MstRespan, Examples)
{
  const Instance p3 = oracles::p3();
  auto t = mst_respan(p3, {0, 1, 2}, node{0});
  ASSERT_TRUE(t);
  EXPECT_DOUBLE_EQ(tree_weight(p3, *t), 3.0);
  EXPECT_EQ(t->root, 0);

  Instance tri = make_instance(3, 1.0);
  tri.add_edge(0, 1, 1);
  tri.add_edge(1, 2, 2);
  tri.add_edge(0, 2, 4);
  auto u = mst_respan(tri, {0, 1, 2});
  ASSERT_TRUE(u);
  EXPECT_DOUBLE_EQ(tree_weight(tri, *u), 3.0);

  EXPECT_FALSE(mst_respan(p3, {0, 2}));
  auto single = mst_respan(p3, {2});
  ASSERT_TRUE(single);
  EXPECT_EQ(single->vertices(), std::vector<node>{2});
}

TEST(MstRespan, RootMustBelongToSet)
{
  EXPECT_THROW(mst_respan(oracles::p3(), {1, 2}, node{0}), Error);
}

TEST(Postprocess, NeverIncreasesCost)
{
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance inst = oracles::random_connected(12, 3, 1.5, seed, static_cast<int>(seed % 2));
    SolverConfig cfg;
    const Solution sol = solve_rooted(inst, 0, cfg).solution;
    const Tree t = sol.tree();
    const real before = tree_cost(inst, t);
    EXPECT_LE(tree_cost(inst, strong_prune(inst, t)), before + 1e-12) << seed;
    if (auto m = mst_respan(inst, t.vertices(), t.root)) {
      EXPECT_LE(tree_weight(inst, *m), tree_weight(inst, t) + 1e-12) << seed;
      EXPECT_TRUE(is_valid_tree(inst, *m));
    }
  }
}

TEST(Postprocess, MstOfWholeGraphMatchesPrim)
{
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = oracles::random_connected(15, 3, 1.0, seed);
    std::vector<node> all(15);
    for (node v = 0; v < 15; ++v)
      all[v] = v;
    auto t = mst_respan(inst, all);
    ASSERT_TRUE(t);
    EXPECT_NEAR(tree_weight(inst, *t), oracles::mst_weight(inst), 1e-9);
  }
}
