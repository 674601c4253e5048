#include <gtest/gtest.h>

#include <algorithm>

#include "pcst/bench.hpp"

using namespace pcst;

namespace {

Suite eight_node_suite()
{
  return parse_suite(R"({"name": "eight", "classes": [{"spec": "R:n=8,nu=2,lambda=1.5", "seeds": 20}]})");
}

}  // namespace

TEST(Suite, ParsesBothSeedForms)
{
  const Suite s = parse_suite(R"({"classes": [
      {"spec": "R:n=8,nu=2,lambda=1.5", "seeds": 3},
      {"spec": {"family": "H", "dim": 3}, "seeds": [4, 9], "label": "H3"}]})");
  ASSERT_EQ(s.entries.size(), 2u);
  EXPECT_EQ(s.entries[0].seeds, (std::vector<std::uint64_t>{0, 1, 2}));
  EXPECT_EQ(s.entries[0].label, "R:n=8,nu=2,lambda=1.5");
  EXPECT_EQ(s.entries[1].seeds, (std::vector<std::uint64_t>{4, 9}));
  EXPECT_EQ(s.entries[1].label, "H3");
  EXPECT_TRUE(s.oracle);
}

TEST(Suite, MalformedFailsBeforeRunning)
{
  EXPECT_THROW(parse_suite(R"({"classes": []})"), Error);
  EXPECT_THROW(parse_suite(R"({"classes": [{"spec": "Q:n=3", "seeds": 2}]})"), Error);
  EXPECT_THROW(parse_suite(R"({"classes": [{"spec": "R:n=8,nu=2,lambda=1", "seeds": []}]})"), Error);
  EXPECT_THROW(parse_suite(R"({"name": "x"})"), Error);
  EXPECT_THROW(run_bench(Suite{}, SolverConfig{}), Error);
}

TEST(Bench, EightNodeGapsAgainstOracle)
{
  const BenchResult res = run_bench(eight_node_suite(), SolverConfig{});
  ASSERT_EQ(res.rows.size(), 20u);
  EXPECT_FALSE(res.any_failure());
  std::vector<real> gaps;
  for (const auto& r : res.rows) {
    ASSERT_TRUE(r.bound) << r.name;
    EXPECT_GE(r.cost, *r.bound - 1e-9);
    EXPECT_GE(r.solution_fraction, 0.0);
    EXPECT_LE(r.solution_fraction, 1.0);
    if (r.gap)
      gaps.push_back(*r.gap);
  }
  ASSERT_EQ(res.classes.size(), 1u);
  const ClassSummary& c = res.classes[0];
  EXPECT_EQ(c.rows, 20);
  EXPECT_EQ(c.with_gap, static_cast<int>(gaps.size()));
  std::sort(gaps.begin(), gaps.end());
  ASSERT_FALSE(gaps.empty());
  EXPECT_NEAR(c.median_gap, 0.0, 1e-9);
  EXPECT_GE(c.mean_gap, 0.0);
}

TEST(Bench, CsvRoundTrip)
{
  BenchResult res = run_bench(eight_node_suite(), SolverConfig{});
  BenchRow odd;
  odd.name = "weird, \"quoted\"\nname";
  odd.cls = "X";
  odd.error = "boom, again";
  res.rows.push_back(odd);
  const auto back = parse_bench_csv(bench_csv(res.rows));
  ASSERT_EQ(back.size(), res.rows.size());
  for (std::size_t k = 0; k < back.size(); ++k)
    EXPECT_EQ(back[k], res.rows[k]) << k;
}

TEST(Bench, RerunGivesSameCosts)
{
  const Suite s = parse_suite(R"({"classes": [{"spec": "R:n=40,nu=3,lambda=2", "seeds": 4}]})");
  const BenchResult a = run_bench(s, SolverConfig{});
  const BenchResult b = run_bench(s, SolverConfig{});
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    EXPECT_EQ(a.rows[k].cost, b.rows[k].cost);
    EXPECT_EQ(a.rows[k].sweeps, b.rows[k].sweeps);
    EXPECT_FALSE(a.rows[k].bound);  // above the oracle guard
  }
}

TEST(Bench, FailingInstanceRecordedInRow)
{
  Instance bad = make_instance(3, 1.0, "bad");
  bad.add_edge(0, 1, -1.0);
  const BenchRow row = bench_instance(bad, "X", SolverConfig{}, PcstOptions{}, true);
  EXPECT_FALSE(row.error.empty());
}
