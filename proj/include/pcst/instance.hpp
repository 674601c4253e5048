#ifndef PCST_INSTANCE_HPP
#define PCST_INSTANCE_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pcst/common.hpp"

namespace pcst {

/// Undirected edge {u, v} carrying both orientation costs.
///
/// cost_uv is paid when u points to v (v is u's parent); cost_vu the other
/// way round. Symmetric instances keep the two equal.
struct Edge {
  node u = 0;
  node v = 0;
  real cost_uv = 0;
  real cost_vu = 0;

  bool operator==(const Edge&) const = default;
};

/// A prize-collecting Steiner tree instance: graph, edge costs, node prizes
/// and the prize multiplier lambda.
struct Instance {
  std::string name;
  int node_count = 0;
  std::vector<Edge> edges;
  std::vector<real> prizes;
  real lambda = 1.0;
  bool symmetric = true;

  /// Cost of leaving node i out of the tree (c_{i*} = lambda * b_i).
  real exclusion_cost(node i) const { return lambda * prizes[i]; }

  void add_edge(node u, node v, real cost) { edges.push_back({u, v, cost, cost}); }

  void add_edge(node u, node v, real cost_uv, real cost_vu)
  {
    edges.push_back({u, v, cost_uv, cost_vu});
    if (cost_uv != cost_vu)
      symmetric = false;
  }

  int edge_count() const { return static_cast<int>(edges.size()); }

  real total_edge_cost() const
  {
    real s = 0;
    for (const auto& e : edges)
      s += std::max(e.cost_uv, e.cost_vu);
    return s;
  }

  real total_prize() const { return std::accumulate(prizes.begin(), prizes.end(), real{0}); }

  bool operator==(const Instance&) const = default;
};

inline Instance make_instance(int n, real lambda = 1.0, std::string name = {})
{
  Instance inst;
  inst.name = std::move(name);
  inst.node_count = n;
  inst.prizes.assign(static_cast<std::size_t>(n), 0.0);
  inst.lambda = lambda;
  return inst;
}

/// Checks every structural invariant; an empty result means the instance is valid.
inline std::vector<std::string> validate(const Instance& inst)
{
  std::vector<std::string> out;
  const int n = inst.node_count;
  if (n < 0)
    out.push_back("negative node count");
  if (static_cast<int>(inst.prizes.size()) != n)
    out.push_back("prize vector has " + std::to_string(inst.prizes.size()) + " entries for " +
                  std::to_string(n) + " nodes");
  if (!std::isfinite(inst.lambda) || inst.lambda < 0)
    out.push_back("invalid lambda " + format_real(inst.lambda));

  for (std::size_t i = 0; i < inst.prizes.size(); ++i) {
    if (!std::isfinite(inst.prizes[i]))
      out.push_back("non-finite prize node " + std::to_string(i));
    else if (inst.prizes[i] < 0)
      out.push_back("negative prize node " + std::to_string(i));
  }

  std::set<std::pair<node, node>> seen;
  for (const auto& e : inst.edges) {
    const std::string tag = std::to_string(e.u) + "-" + std::to_string(e.v);
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      out.push_back("node index out of range in edge " + tag);
      continue;
    }
    if (e.u == e.v) {
      out.push_back("self-loop " + tag);
      continue;
    }
    if (!seen.insert(std::minmax(e.u, e.v)).second)
      out.push_back("duplicate edge " + tag);
    const bool symmetric_pair = e.cost_uv == e.cost_vu;
    for (real c : {e.cost_uv, e.cost_vu}) {
      if (!std::isfinite(c))
        out.push_back("non-finite cost edge " + tag);
      else if (c < 0)
        out.push_back("negative cost edge " + tag);
      if (symmetric_pair)
        break;
    }
    if (inst.symmetric && e.cost_uv != e.cost_vu)
      out.push_back("asymmetric cost on symmetric instance edge " + tag);
  }
  return out;
}

inline void require_valid(const Instance& inst)
{
  auto v = validate(inst);
  if (!v.empty())
    throw Error("invalid instance: " + v.front());
}

/// Compressed adjacency of an instance. Neighbor lists are sorted by node
/// index; slot e = offset[j] + k addresses the directed edge j -> nbr[e].
struct Graph {
  int n = 0;
  std::vector<int> offset;  // size n + 1
  std::vector<node> nbr;
  std::vector<real> cost;   // cost[e] = c_{j, nbr[e]} for e owned by j
  std::vector<int> rev;     // rev[e] = slot of nbr[e] -> j
  std::vector<node> owner;  // owner[e] = j

  int degree(node j) const { return offset[j + 1] - offset[j]; }
  int directed_edge_count() const { return static_cast<int>(nbr.size()); }

  /// Slot of j -> k, or -1 when not adjacent.
  int slot(node j, node k) const
  {
    auto first = nbr.begin() + offset[j];
    auto last = nbr.begin() + offset[j + 1];
    auto it = std::lower_bound(first, last, k);
    return (it != last && *it == k) ? static_cast<int>(it - nbr.begin()) : -1;
  }

  explicit Graph(const Instance& inst) : n(inst.node_count)
  {
    std::vector<std::vector<std::pair<node, real>>> adj(static_cast<std::size_t>(n));
    for (const auto& e : inst.edges) {
      adj[e.u].emplace_back(e.v, e.cost_uv);
      adj[e.v].emplace_back(e.u, e.cost_vu);
    }
    offset.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int j = 0; j < n; ++j) {
      std::sort(adj[j].begin(), adj[j].end());
      offset[j + 1] = offset[j] + static_cast<int>(adj[j].size());
    }
    nbr.reserve(offset[n]);
    cost.reserve(offset[n]);
    owner.reserve(offset[n]);
    for (int j = 0; j < n; ++j)
      for (auto [k, c] : adj[j]) {
        nbr.push_back(k);
        cost.push_back(c);
        owner.push_back(j);
      }
    rev.resize(nbr.size());
    for (int e = 0; e < directed_edge_count(); ++e)
      rev[e] = slot(nbr[e], owner[e]);
  }
};

/// Cost c_{ij} of i pointing to j; +inf when the edge is absent.
inline real edge_cost(const Graph& g, node i, node j)
{
  int e = g.slot(i, j);
  return e < 0 ? kPosInf : g.cost[e];
}

}  // namespace pcst

#endif
