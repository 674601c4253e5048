#ifndef PCST_TESTS_ORACLES_HPP
#define PCST_TESTS_ORACLES_HPP

// Reference computations for the tests, written independently of the
// library's solvers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "pcst/common.hpp"
#include "pcst/instance.hpp"

namespace oracles {

using pcst::Instance;
using pcst::node;
using pcst::real;

inline constexpr real kInf = std::numeric_limits<real>::infinity();

/// r - a - b with c(r,a) = 1, c(a,b) = 2, b_a = 0.5, b_b = 3, lambda = 1.
inline Instance p3()
{
  Instance inst = pcst::make_instance(3, 1.0, "P3");
  inst.add_edge(0, 1, 1.0);
  inst.add_edge(1, 2, 2.0);
  inst.prizes = {0.0, 0.5, 3.0};
  return inst;
}

/// r - a with c = 1 and b_a = 3.
inline Instance two_node()
{
  Instance inst = pcst::make_instance(2, 1.0, "pair");
  inst.add_edge(0, 1, 1.0);
  inst.prizes = {0.0, 3.0};
  return inst;
}

inline std::vector<std::vector<std::pair<node, real>>> adjacency(const Instance& inst)
{
  std::vector<std::vector<std::pair<node, real>>> adj(static_cast<std::size_t>(inst.node_count));
  for (const auto& e : inst.edges) {
    adj[e.u].emplace_back(e.v, e.cost_uv);
    adj[e.v].emplace_back(e.u, e.cost_vu);
  }
  return adj;
}

/// Uniform random labelled tree (random attachment) with costs and prizes.
/// cost_mode 0: real costs in [0.5, 4); 1: costs in {1, 2, 4}.
inline Instance random_tree(int n, real lambda, std::uint64_t seed, int cost_mode = 0)
{
  pcst::Rng rng(seed);
  Instance inst = pcst::make_instance(n, lambda, "tree");
  for (node v = 1; v < n; ++v) {
    const node u = static_cast<node>(rng.uniform_int(0, v - 1));
    const real c = cost_mode == 0 ? rng.uniform(0.5, 4.0) : std::ldexp(1.0, static_cast<int>(rng.uniform_int(0, 2)));
    inst.add_edge(u, v, c);
  }
  for (node v = 0; v < n; ++v)
    inst.prizes[v] = rng.uniform(0.0, 3.0);
  return inst;
}

/// Connected G(n, p) sample with mean degree about nu; retried until connected.
inline Instance random_connected(int n, real nu, real lambda, std::uint64_t seed, int cost_mode = 0)
{
  pcst::Rng rng(seed);
  for (;;) {
    Instance inst = pcst::make_instance(n, lambda, "random");
    const real p = std::min(1.0, nu / (n - 1));
    for (node i = 0; i < n; ++i)
      for (node j = i + 1; j < n; ++j)
        if (rng.uniform01() < p) {
          const real c =
              cost_mode == 0 ? rng.uniform(0.5, 4.0) : std::ldexp(1.0, static_cast<int>(rng.uniform_int(0, 2)));
          inst.add_edge(i, j, c);
        }
    for (node v = 0; v < n; ++v)
      inst.prizes[v] = rng.uniform01();
    // connectivity by flood fill
    auto adj = adjacency(inst);
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<node> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      node v = stack.back();
      stack.pop_back();
      for (auto [w, c] : adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          stack.push_back(w);
        }
    }
    if (count == n)
      return inst;
  }
}

/// Optimal cost of a tree-shaped instance rooted at r: the best subtree
/// keeps a child branch when what it collects beats its connecting edge.
inline real tree_optimum_rooted(const Instance& inst, node r)
{
  auto adj = adjacency(inst);
  std::function<real(node, node)> gain = [&](node v, node from) {
    real g = inst.lambda * inst.prizes[v];
    for (auto [w, c] : adj[v])
      if (w != from)
        g += std::max(0.0, gain(w, v) - c);
    return g;
  };
  real excluded = 0;
  for (node v = 0; v < inst.node_count; ++v)
    if (v != r)
      excluded += inst.lambda * inst.prizes[v];
  return excluded - (gain(r, pcst::kNone) - inst.lambda * inst.prizes[r]);
}

inline real tree_optimum(const Instance& inst)
{
  real best = kInf;
  for (node r = 0; r < inst.node_count; ++r)
    best = std::min(best, tree_optimum_rooted(inst, r));
  return best;
}

/// Every parent vector over {*} and the neighbors, kept when it forms a tree
/// hanging from r with depth at most D. Only for a handful of nodes.
inline real brute_rooted(const Instance& inst, node r, int D)
{
  const int n = inst.node_count;
  auto adj = adjacency(inst);
  std::vector<int> choice(static_cast<std::size_t>(n), 0);  // 0 = *, k = k-th neighbor
  real best = kInf;
  for (;;) {
    real cost = 0;
    bool ok = true;
    for (node v = 0; v < n && ok; ++v) {
      if (v == r)
        continue;
      if (choice[v] == 0) {
        cost += inst.lambda * inst.prizes[v];
        continue;
      }
      cost += adj[v][choice[v] - 1].second;
      // walk up to the root
      node u = v;
      int steps = 0;
      while (u != r && steps <= D) {
        if (choice[u] == 0) {
          ok = false;
          break;
        }
        u = adj[u][choice[u] - 1].first;
        ++steps;
      }
      if (u != r || steps > D)
        ok = false;
    }
    if (ok)
      best = std::min(best, cost);
    node v = 0;
    for (; v < n; ++v) {
      if (v == r)
        continue;
      if (++choice[v] <= static_cast<int>(adj[v].size()))
        break;
      choice[v] = 0;
    }
    if (v == n)
      return best;
  }
}

/// Prim's algorithm over the whole graph (connected input).
inline real mst_weight(const Instance& inst)
{
  const int n = inst.node_count;
  auto adj = adjacency(inst);
  std::vector<real> key(static_cast<std::size_t>(n), kInf);
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  key[0] = 0;
  real total = 0;
  for (int k = 0; k < n; ++k) {
    node pick = -1;
    for (node v = 0; v < n; ++v)
      if (!in[v] && (pick < 0 || key[v] < key[pick]))
        pick = v;
    in[pick] = 1;
    total += key[pick];
    for (auto [w, c] : adj[pick])
      if (!in[w])
        key[w] = std::min(key[w], c);
  }
  return total;
}

}  // namespace oracles

#endif
