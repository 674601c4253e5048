#ifndef PCST_SOLUTION_HPP
#define PCST_SOLUTION_HPP

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pcst/common.hpp"
#include "pcst/instance.hpp"

namespace pcst {

/// Rooted tree over a vertex subset. parent[root] == root; parent[v] == kNone
/// for vertices outside the tree.
struct Tree {
  node root = 0;
  std::vector<node> parent;

  bool contains(node v) const { return parent[v] != kNone; }

  std::vector<node> vertices() const
  {
    std::vector<node> out;
    for (node v = 0; v < static_cast<node>(parent.size()); ++v)
      if (contains(v))
        out.push_back(v);
    return out;
  }

  int size() const { return static_cast<int>(vertices().size()); }

  bool operator==(const Tree&) const = default;
};

inline Tree single_node_tree(int n, node root)
{
  Tree t{root, std::vector<node>(static_cast<std::size_t>(n), kNone)};
  t.parent[root] = root;
  return t;
}

/// Energy of a parent assignment: edge cost to the parent for every tree
/// vertex except the root, lambda * b for every vertex left out.
inline real assignment_cost(const Instance& inst, const Graph& g, const std::vector<node>& parent, node root)
{
  if (static_cast<int>(parent.size()) != inst.node_count)
    throw Error("solution size " + std::to_string(parent.size()) + " does not match instance size " +
                std::to_string(inst.node_count));
  real s = 0;
  for (node v = 0; v < inst.node_count; ++v) {
    if (v == root)
      continue;
    if (parent[v] == kNone)
      s += inst.exclusion_cost(v);
    else
      s += edge_cost(g, v, parent[v]);
  }
  return s;
}

inline real tree_cost(const Instance& inst, const Tree& t)
{
  Graph g(inst);
  return assignment_cost(inst, g, t.parent, t.root);
}

/// Depth of every tree vertex, or an empty vector when `t` is not a valid
/// tree of `inst` (cycle, missing edge, vertex not reaching the root).
inline std::vector<int> tree_depths(const Graph& g, const Tree& t)
{
  const int n = g.n;
  if (static_cast<int>(t.parent.size()) != n || t.root < 0 || t.root >= n || t.parent[t.root] != t.root)
    return {};
  std::vector<int> depth(static_cast<std::size_t>(n), -1);
  depth[t.root] = 0;
  for (node v = 0; v < n; ++v) {
    if (t.parent[v] == kNone || depth[v] >= 0)
      continue;
    std::vector<node> path;
    node u = v;
    while (depth[u] < 0) {
      if (t.parent[u] == kNone || static_cast<int>(path.size()) > n || g.slot(u, t.parent[u]) < 0)
        return {};
      path.push_back(u);
      u = t.parent[u];
    }
    for (auto it = path.rbegin(); it != path.rend(); ++it)
      depth[*it] = depth[t.parent[*it]] + 1;
  }
  return depth;
}

inline bool is_valid_tree(const Instance& inst, const Tree& t)
{
  return !tree_depths(Graph(inst), t).empty();
}

/// A decoded solver output: the induced subgraph read from the decisions.
struct Solution {
  node root = 0;
  std::vector<node> parent;  // kNone outside the tree, root points to itself
  std::vector<int> depth;    // -1 outside the tree
  real cost = 0;
  bool converged = false;
  int sweeps_used = 0;
  bool repaired = false;

  Tree tree() const { return {root, parent}; }

  std::vector<node> vertex_set() const { return tree().vertices(); }

  std::vector<std::pair<node, node>> edge_set() const
  {
    std::vector<std::pair<node, node>> out;
    for (node v = 0; v < static_cast<node>(parent.size()); ++v)
      if (v != root && parent[v] != kNone)
        out.emplace_back(v, parent[v]);
    return out;
  }

  int size() const { return static_cast<int>(vertex_set().size()); }
};

inline real solution_cost(const Instance& inst, const Solution& sol)
{
  return assignment_cost(inst, Graph(inst), sol.parent, sol.root);
}

inline Solution solution_from_tree(const Instance& inst, const Tree& t)
{
  Graph g(inst);
  Solution s;
  s.root = t.root;
  s.parent = t.parent;
  s.depth = tree_depths(g, t);
  if (s.depth.empty())
    throw Error("not a valid tree of the instance");
  s.cost = assignment_cost(inst, g, t.parent, t.root);
  return s;
}

inline nlohmann::json solution_to_json(const Solution& s)
{
  return {{"root", s.root},           {"parents", s.parent}, {"depths", s.depth},
          {"cost", s.cost},           {"converged", s.converged},
          {"sweeps", s.sweeps_used},  {"repaired", s.repaired}};
}

inline Solution solution_from_json(const nlohmann::json& j)
{
  Solution s;
  s.root = j.at("root").get<node>();
  s.parent = j.at("parents").get<std::vector<node>>();
  s.depth = j.at("depths").get<std::vector<int>>();
  s.cost = j.at("cost").get<real>();
  s.converged = j.at("converged").get<bool>();
  s.sweeps_used = j.at("sweeps").get<int>();
  s.repaired = j.value("repaired", false);
  return s;
}

inline nlohmann::json tree_to_json(const Tree& t)
{
  nlohmann::json edges = nlohmann::json::array();
  for (node v = 0; v < static_cast<node>(t.parent.size()); ++v)
    if (v != t.root && t.parent[v] != kNone)
      edges.push_back({v, t.parent[v]});
  return {{"root", t.root}, {"vertices", t.vertices()}, {"edges", edges}};
}

}  // namespace pcst

#endif
