#ifndef PCST_ORACLE_HPP
#define PCST_ORACLE_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "pcst/common.hpp"
#include "pcst/instance.hpp"
#include "pcst/solution.hpp"

namespace pcst {

// Exhaustive solver for small instances, used as ground truth.
//
// Unbounded depth: every vertex subset (containing the root when one is
// given) is tested for induced connectivity and priced as the minimum
// spanning tree of the induced subgraph plus the excluded prizes.
//
// Bounded depth: a layered search. A rooted tree of depth <= D is a sequence
// of disjoint layers L0 = {r}, L1, ..., each vertex attached to its cheapest
// neighbor in the previous layer. States (placed set, last layer) are
// expanded level by level.

inline constexpr int kOracleMaxNodes = 20;
inline constexpr int kOracleMaxNodesBounded = 12;

struct OptResult {
  real cost = kPosInf;
  Tree tree;
  long long nodes_explored = 0;
};

namespace detail {

inline bool lex_smaller(const Tree& a, const Tree& b)
{
  return a.vertices() < b.vertices();
}

inline void offer(OptResult& best, real cost, Tree t)
{
  if (cost < best.cost || (cost == best.cost && lex_smaller(t, best.tree))) {
    best.cost = cost;
    best.tree = std::move(t);
  }
}

inline OptResult exact_unbounded(const Instance& inst, std::optional<node> root)
{
  const int n = inst.node_count;
  std::vector<std::uint32_t> adj(static_cast<std::size_t>(n), 0);
  std::vector<real> w(static_cast<std::size_t>(n) * n, kPosInf);
  for (const auto& e : inst.edges) {
    adj[e.u] |= 1u << e.v;
    adj[e.v] |= 1u << e.u;
    w[e.u * n + e.v] = w[e.v * n + e.u] = e.cost_uv;
  }
  std::vector<real> excl(static_cast<std::size_t>(n));
  real all_excl = 0;
  for (node v = 0; v < n; ++v)
    all_excl += excl[v] = inst.exclusion_cost(v);

  OptResult best;
  const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
  std::vector<node> members;
  std::vector<real> key(static_cast<std::size_t>(n));
  std::vector<node> link(static_cast<std::size_t>(n));
  std::vector<char> done(static_cast<std::size_t>(n));
  for (std::uint32_t mask = 1; mask <= full && mask != 0; ++mask) {
    if (root && !(mask & (1u << *root)))
      continue;
    ++best.nodes_explored;
    real excluded = all_excl;
    members.clear();
    for (std::uint32_t m = mask; m; m &= m - 1) {
      node v = std::countr_zero(m);
      members.push_back(v);
      excluded -= excl[v];
    }
    if (excluded > best.cost)
      continue;
    // induced connectivity
    const node start = root ? *root : members.front();
    std::uint32_t seen = 1u << start, frontier = seen;
    while (frontier) {
      std::uint32_t nxt = 0;
      for (std::uint32_t m = frontier; m; m &= m - 1)
        nxt |= adj[std::countr_zero(m)];
      nxt &= mask & ~seen;
      seen |= nxt;
      frontier = nxt;
    }
    if (seen != mask)
      continue;
    // Prim over the members, rooted at start
    for (node v : members) {
      key[v] = w[start * n + v];
      link[v] = start;
      done[v] = 0;
    }
    done[start] = 1;
    real weight = 0;
    Tree t = single_node_tree(n, start);
    for (std::size_t k = 1; k < members.size(); ++k) {
      node pick = kNone;
      for (node v : members)
        if (!done[v] && (pick == kNone || key[v] < key[pick]))
          pick = v;
      if (pick == kNone)
        break;
      done[pick] = 1;
      weight += key[pick];
      t.parent[pick] = link[pick];
      for (node v : members)
        if (!done[v] && w[pick * n + v] < key[v]) {
          key[v] = w[pick * n + v];
          link[v] = pick;
        }
    }
    offer(best, weight + excluded, std::move(t));
  }
  return best;
}

inline OptResult exact_bounded_rooted(const Instance& inst, node root, int depth_bound)
{
  const int n = inst.node_count;
  Graph g(inst);
  // other vertices get compact bit positions
  std::vector<node> others;
  std::vector<int> bit(static_cast<std::size_t>(n), -1);
  for (node v = 0; v < n; ++v)
    if (v != root) {
      bit[v] = static_cast<int>(others.size());
      others.push_back(v);
    }
  const int m = static_cast<int>(others.size());
  const std::uint32_t all = (1u << m) - 1;

  // attach[v][L] = cheapest edge from v into layer L; L = 0 stands for {root}
  std::vector<std::vector<real>> attach(static_cast<std::size_t>(m), std::vector<real>(std::size_t{1} << m));
  std::vector<std::uint32_t> nbr_mask(static_cast<std::size_t>(m), 0);
  std::uint32_t root_nbrs = 0;
  for (int i = 0; i < m; ++i) {
    const node v = others[i];
    attach[i][0] = edge_cost(g, v, root);
    if (g.slot(v, root) >= 0)
      root_nbrs |= 1u << i;
    for (int e = g.offset[v]; e < g.offset[v + 1]; ++e)
      if (g.nbr[e] != root)
        nbr_mask[i] |= 1u << bit[g.nbr[e]];
    for (std::uint32_t L = 1; L <= all; ++L) {
      const int low = std::countr_zero(L);
      const real prev = (L & (L - 1)) ? attach[i][L & (L - 1)] : kPosInf;
      attach[i][L] = std::min(prev, edge_cost(g, v, others[low]));
    }
  }
  auto key_of = [m](std::uint32_t P, std::uint32_t L) { return (static_cast<std::uint64_t>(P) << m) | L; };
  real all_excl = 0;
  std::vector<real> excl(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    all_excl += excl[i] = inst.exclusion_cost(others[i]);

  struct Entry {
    real cost;
    std::uint64_t prev;
  };
  std::vector<std::unordered_map<std::uint64_t, Entry>> levels(1);
  levels[0][key_of(0, 0)] = {0.0, 0};

  OptResult best;
  real best_cost = all_excl;
  int best_level = 0;
  std::uint64_t best_key = key_of(0, 0);

  for (int h = 1; h <= depth_bound && !levels.back().empty(); ++h) {
    std::unordered_map<std::uint64_t, Entry> next;
    for (const auto& [k, entry] : levels.back()) {
      const std::uint32_t P = static_cast<std::uint32_t>(k >> m);
      const std::uint32_t L = static_cast<std::uint32_t>(k & all);
      std::uint32_t cand = 0;
      if (h == 1)
        cand = root_nbrs;
      else
        for (std::uint32_t x = L; x; x &= x - 1)
          cand |= nbr_mask[std::countr_zero(x)];
      cand &= ~P;
      for (std::uint32_t N = cand; N; N = (N - 1) & cand) {
        ++best.nodes_explored;
        real c = entry.cost;
        real excluded = all_excl;
        for (std::uint32_t x = P | N; x; x &= x - 1)
          excluded -= excl[std::countr_zero(x)];
        for (std::uint32_t x = N; x; x &= x - 1)
          c += attach[std::countr_zero(x)][L];
        if (c + 0.0 >= kPosInf)
          continue;
        const auto nk = key_of(P | N, N);
        auto it = next.find(nk);
        if (it == next.end() || c < it->second.cost)
          next[nk] = {c, k};
        if (c + excluded < best_cost) {
          best_cost = c + excluded;
          best_level = h;
          best_key = nk;
        }
      }
    }
    levels.push_back(std::move(next));
  }

  // rebuild the layers, then attach each vertex to its cheapest parent
  Tree t = single_node_tree(n, root);
  std::vector<std::uint32_t> layer(static_cast<std::size_t>(best_level) + 1, 0);
  std::uint64_t k = best_key;
  for (int h = best_level; h >= 1; --h) {
    layer[h] = static_cast<std::uint32_t>(k & all);
    k = levels[h].at(k).prev;
  }
  for (int h = 1; h <= best_level; ++h)
    for (std::uint32_t x = layer[h]; x; x &= x - 1) {
      const int i = std::countr_zero(x);
      const node v = others[i];
      if (h == 1) {
        t.parent[v] = root;
        continue;
      }
      node pick = kNone;
      real pc = kPosInf;
      for (std::uint32_t y = layer[h - 1]; y; y &= y - 1) {
        const node u = others[std::countr_zero(y)];
        const real c = edge_cost(g, v, u);
        if (c < pc) {
          pc = c;
          pick = u;
        }
      }
      t.parent[v] = pick;
    }
  best.cost = best_cost;
  best.tree = std::move(t);
  return best;
}

}  // namespace detail

/// Globally optimal tree by exhaustive search. Rooted when `root` is given;
/// depth-bounded when `depth_bound` is given and can bind.
inline OptResult exact_pcst(const Instance& inst, std::optional<node> root = std::nullopt,
                            std::optional<int> depth_bound = std::nullopt)
{
  require_valid(inst);
  const int n = inst.node_count;
  if (n < 1)
    throw Error("exact_pcst: empty instance");
  if (n > kOracleMaxNodes)
    throw Error("exact_pcst: instance too large for exhaustive search (" + std::to_string(n) + " > " +
                std::to_string(kOracleMaxNodes) + " nodes)");
  if (root && (*root < 0 || *root >= n))
    throw Error("exact_pcst: root out of range");
  const bool binds = depth_bound && *depth_bound < n - 1;
  if (!binds && inst.symmetric)
    return detail::exact_unbounded(inst, root);

  const int D = depth_bound ? *depth_bound : n - 1;
  if (n > kOracleMaxNodesBounded)
    throw Error("exact_pcst: depth-bounded search limited to " + std::to_string(kOracleMaxNodesBounded) +
                " nodes");
  if (root)
    return detail::exact_bounded_rooted(inst, *root, D);
  OptResult best;
  for (node r = 0; r < n; ++r) {
    OptResult cur = detail::exact_bounded_rooted(inst, r, D);
    best.nodes_explored += cur.nodes_explored;
    detail::offer(best, cur.cost, std::move(cur.tree));
  }
  return best;
}

/// 100 * (cost - lower_bound) / lower_bound.
inline real gap_percent(real cost, real lower_bound)
{
  if (!(lower_bound > 0))
    throw Error("gap_percent: lower bound must be positive");
  return 100.0 * (cost - lower_bound) / lower_bound;
}

}  // namespace pcst

#endif
