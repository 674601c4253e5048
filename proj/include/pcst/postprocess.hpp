#ifndef PCST_POSTPROCESS_HPP
#define PCST_POSTPROCESS_HPP

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

#include "pcst/common.hpp"
#include "pcst/instance.hpp"
#include "pcst/solution.hpp"

namespace pcst {

class UnionFind {
public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)), rank_(static_cast<std::size_t>(n), 0)
  {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x)
  {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(int a, int b)
  {
    a = find(a);
    b = find(b);
    if (a == b)
      return false;
    if (rank_[a] < rank_[b])
      std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b])
      ++rank_[a];
    return true;
  }

private:
  std::vector<int> parent_;
  std::vector<int> rank_;
};

/// Children lists of a tree, in increasing vertex order.
inline std::vector<std::vector<node>> tree_children(const Tree& t)
{
  std::vector<std::vector<node>> ch(t.parent.size());
  for (node v = 0; v < static_cast<node>(t.parent.size()); ++v)
    if (v != t.root && t.parent[v] != kNone)
      ch[t.parent[v]].push_back(v);
  return ch;
}

/// Vertices of `t` listed parents-before-children.
inline std::vector<node> preorder(const Tree& t)
{
  auto ch = tree_children(t);
  std::vector<node> order{t.root};
  for (std::size_t k = 0; k < order.size(); ++k)
    for (node c : ch[order[k]])
      order.push_back(c);
  return order;
}

/// Strong pruning of a rooted tree.
///
/// Net worth bottom-up: W(v) = lambda b_v + sum over kept children u of
/// (W(u) - c_uv). A child subtree is cut when W(u) - c_uv <= 0, i.e. when
/// its collected prizes do not pay for the edge connecting it.
inline Tree strong_prune(const Instance& inst, const Tree& tree)
{
  Graph g(inst);
  if (tree_depths(g, tree).empty())
    throw Error("strong_prune: input is not a valid tree");
  const auto order = preorder(tree);
  std::vector<real> worth(tree.parent.size(), 0.0);
  std::vector<char> keep(tree.parent.size(), 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const node v = *it;
    worth[v] += inst.exclusion_cost(v);
    if (v == tree.root)
      continue;
    const node p = tree.parent[v];
    const real margin = worth[v] - edge_cost(g, v, p);
    if (margin > 0) {
      keep[v] = 1;
      worth[p] += margin;
    }
  }
  Tree out = single_node_tree(static_cast<int>(tree.parent.size()), tree.root);
  for (node v : order)
    if (v != tree.root && keep[v] && out.contains(tree.parent[v]))
      out.parent[v] = tree.parent[v];
  return out;
}

/// Minimum spanning tree of the subgraph induced by `vertex_set`, rooted at
/// `root` (the smallest vertex when omitted). Kruskal with ties broken by
/// edge index. Returns nullopt when the induced subgraph is disconnected.
inline std::optional<Tree> mst_respan(const Instance& inst, const std::vector<node>& vertex_set,
                                      std::optional<node> root = std::nullopt)
{
  const int n = inst.node_count;
  if (vertex_set.empty())
    return std::nullopt;
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  for (node v : vertex_set) {
    if (v < 0 || v >= n)
      throw Error("mst_respan: vertex out of range");
    in[v] = 1;
  }
  const node r = root.value_or(*std::min_element(vertex_set.begin(), vertex_set.end()));
  if (!in[r])
    throw Error("mst_respan: root not in the vertex set");

  std::vector<int> order;
  for (int k = 0; k < inst.edge_count(); ++k)
    if (in[inst.edges[k].u] && in[inst.edges[k].v])
      order.push_back(k);
  auto weight = [&](int k) { return std::min(inst.edges[k].cost_uv, inst.edges[k].cost_vu); };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return weight(a) < weight(b); });

  UnionFind uf(n);
  std::vector<std::vector<node>> adj(static_cast<std::size_t>(n));
  int joined = 0;
  for (int k : order) {
    const auto& e = inst.edges[k];
    if (uf.unite(e.u, e.v)) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
      ++joined;
    }
  }
  const int members = static_cast<int>(std::count(in.begin(), in.end(), 1));
  if (joined != members - 1)
    return std::nullopt;

  Tree t = single_node_tree(n, r);
  std::vector<node> stack{r};
  while (!stack.empty()) {
    node v = stack.back();
    stack.pop_back();
    for (node w : adj[v])
      if (!t.contains(w)) {
        t.parent[w] = v;
        stack.push_back(w);
      }
  }
  return t;
}

/// Total edge weight of a tree (no prize terms).
inline real tree_weight(const Instance& inst, const Tree& t)
{
  Graph g(inst);
  real s = 0;
  for (node v = 0; v < static_cast<node>(t.parent.size()); ++v)
    if (v != t.root && t.parent[v] != kNone)
      s += edge_cost(g, v, t.parent[v]);
  return s;
}

/// MST respan of the vertex set (when connected), then strong pruning.
inline Tree post_process(const Instance& inst, Tree t, bool respan, bool prune)
{
  if (respan)
    if (auto m = mst_respan(inst, t.vertices(), t.root))
      t = *m;
  if (prune)
    t = strong_prune(inst, t);
  return t;
}

}  // namespace pcst

#endif
