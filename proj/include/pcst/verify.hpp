#ifndef PCST_VERIFY_HPP
#define PCST_VERIFY_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcst/common.hpp"
#include "pcst/instance.hpp"
#include "pcst/maxsum.hpp"
#include "pcst/oracle.hpp"
#include "pcst/postprocess.hpp"
#include "pcst/solution.hpp"

namespace pcst {

// Checks on solver outputs that go through the computation tree: the cover
// of the graph by non-backtracking walks from a center node. Max-Sum is exact
// on that tree, and a fixed point on the graph lifts to one on the tree
// everywhere except at the leaves.

/// Computation tree of radius t around v0. Tree node 0 is the center; node
/// x stands for a non-backtracking walk and proj[x] is where it ends.
struct CompTree {
  node center = 0;
  int radius = 0;
  std::vector<node> proj;
  std::vector<int> up;     // tree parent, -1 at the center
  std::vector<int> level;  // walk length
  std::vector<int> offset; // CSR over tree neighbors
  std::vector<int> nbr;
  std::vector<real> cost;  // cost[e] = c(proj[owner], proj[nbr[e]])
  std::vector<real> prize; // lifted prizes, per tree node

  int size() const { return static_cast<int>(proj.size()); }
  int degree(int x) const { return offset[x + 1] - offset[x]; }
  int directed_edge_count() const { return static_cast<int>(nbr.size()); }
  int owner(int e) const
  {
    return static_cast<int>(std::upper_bound(offset.begin(), offset.end(), e) - offset.begin()) - 1;
  }
  int slot(int x, int y) const
  {
    for (int e = offset[x]; e < offset[x + 1]; ++e)
      if (nbr[e] == y)
        return e;
    return -1;
  }
};

inline constexpr int kCompTreeDefaultCap = 2'000'000;

inline CompTree computation_tree(const Instance& inst, node v0, int t, int cap = kCompTreeDefaultCap)
{
  if (t < 1)
    throw Error("computation_tree: radius must be at least 1");
  if (v0 < 0 || v0 >= inst.node_count)
    throw Error("computation_tree: center out of range");
  const Graph g(inst);
  CompTree ct;
  ct.center = v0;
  ct.radius = t;
  ct.proj = {v0};
  ct.up = {-1};
  ct.level = {0};
  std::vector<std::vector<int>> kids(1);
  for (std::size_t k = 0; k < ct.proj.size(); ++k) {
    if (ct.level[k] == t)
      continue;
    const node v = ct.proj[k];
    const node back = ct.up[k] < 0 ? kNone : ct.proj[ct.up[k]];
    for (int e = g.offset[v]; e < g.offset[v + 1]; ++e) {
      if (g.nbr[e] == back)
        continue;
      if (static_cast<int>(ct.proj.size()) >= cap)
        throw Error("computation_tree: more than " + std::to_string(cap) + " tree nodes");
      ct.proj.push_back(g.nbr[e]);
      ct.up.push_back(static_cast<int>(k));
      ct.level.push_back(ct.level[k] + 1);
      kids[k].push_back(static_cast<int>(ct.proj.size()) - 1);
      kids.emplace_back();
    }
  }
  const int n = ct.size();
  ct.offset.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int x = 0; x < n; ++x)
    ct.offset[x + 1] = ct.offset[x] + static_cast<int>(kids[x].size()) + (ct.up[x] >= 0 ? 1 : 0);
  ct.nbr.resize(ct.offset[n]);
  ct.cost.resize(ct.offset[n]);
  for (int x = 0; x < n; ++x) {
    int e = ct.offset[x];
    if (ct.up[x] >= 0)
      ct.nbr[e++] = ct.up[x];
    for (int y : kids[x])
      ct.nbr[e++] = y;
    for (int f = ct.offset[x]; f < ct.offset[x + 1]; ++f)
      ct.cost[f] = edge_cost(g, ct.proj[x], ct.proj[ct.nbr[f]]);
  }
  ct.prize.resize(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x)
    ct.prize[x] = inst.prizes[ct.proj[x]];
  return ct;
}

/// Every tree node below the radius has the full graph neighborhood of its
/// projection, mapped one to one.
inline bool locally_isomorphic(const Instance& inst, const CompTree& ct)
{
  const Graph g(inst);
  for (int x = 0; x < ct.size(); ++x) {
    if (ct.level[x] == ct.radius)
      continue;
    if (ct.degree(x) != g.degree(ct.proj[x]))
      return false;
    std::vector<node> image;
    for (int e = ct.offset[x]; e < ct.offset[x + 1]; ++e)
      image.push_back(ct.proj[ct.nbr[e]]);
    std::sort(image.begin(), image.end());
    if (std::adjacent_find(image.begin(), image.end()) != image.end())
      return false;
    for (node w : image)
      if (g.slot(ct.proj[x], w) < 0)
        return false;
  }
  return true;
}

/// One compressed message per directed tree edge, copied from the graph
/// message between the projections.
struct LiftedMessages {
  int depth = 1;
  std::vector<real> A, C, B;

  int width() const { return depth + 1; }
  std::span<real> a(int e) { return {A.data() + static_cast<std::size_t>(e) * width(), static_cast<std::size_t>(width())}; }
  std::span<real> c(int e) { return {C.data() + static_cast<std::size_t>(e) * width(), static_cast<std::size_t>(width())}; }
  std::span<const real> a(int e) const
  {
    return {A.data() + static_cast<std::size_t>(e) * width(), static_cast<std::size_t>(width())};
  }
  std::span<const real> c(int e) const
  {
    return {C.data() + static_cast<std::size_t>(e) * width(), static_cast<std::size_t>(width())};
  }
};

inline LiftedMessages lift_messages(const MessageState& s, const CompTree& ct)
{
  const Graph& g = s.graph();
  LiftedMessages m;
  m.depth = s.depth();
  const auto cells = static_cast<std::size_t>(ct.directed_edge_count()) * m.width();
  m.A.resize(cells);
  m.C.resize(cells);
  m.B.resize(static_cast<std::size_t>(ct.directed_edge_count()));
  for (int x = 0; x < ct.size(); ++x)
    for (int e = ct.offset[x]; e < ct.offset[x + 1]; ++e) {
      const int ge = g.slot(ct.proj[x], ct.proj[ct.nbr[e]]);
      std::copy(s.A(ge).begin(), s.A(ge).end(), m.a(e).begin());
      std::copy(s.C(ge).begin(), s.C(ge).end(), m.c(e).begin());
      m.B[e] = s.B(ge);
    }
  return m;
}

struct LiftReport {
  bool ok = false;
  real max_residual = 0;
  int checked_edges = 0;
  int exempt_edges = 0;
  int worst_edge = -1;
  std::string error;
};

namespace detail {

// A node state in the explicit (depth, parent) form. parent == kNone is *,
// parent == self marks the root.
struct NodeState {
  int d;
  int p;
};

inline bool constraint_holds(int j, NodeState xj, int l, NodeState xl)
{
  if (xl.p == j && (xj.p == kNone || xl.d != xj.d + 1))
    return false;
  if (xj.p == l && (xl.p == kNone || xj.d != xl.d + 1))
    return false;
  return true;
}

inline std::vector<NodeState> node_states(const CompTree& ct, int x, bool is_root, int D)
{
  if (is_root)
    return {{0, x}};
  std::vector<NodeState> out{{0, kNone}};
  for (int e = ct.offset[x]; e < ct.offset[x + 1]; ++e)
    for (int d = 1; d <= D; ++d)
      out.push_back({d, ct.nbr[e]});
  return out;
}

// States of a neighbor l as seen from j: *, pointing to j, or pointing to
// some other neighbor (kElsewhere). A tree leaf has no other tree
// neighbors, but its lifted message still carries the graph's.
inline constexpr int kElsewhere = -2;

inline std::vector<NodeState> neighbor_states(int l, int j, bool is_root, int D)
{
  if (is_root)
    return {{0, l}};
  std::vector<NodeState> out{{0, kNone}};
  for (int d = 1; d <= D; ++d) {
    out.push_back({d, j});
    out.push_back({d, kElsewhere});
  }
  return out;
}

// Value of the message l -> j at state xl of l, read from the compressed form.
inline real message_value(const LiftedMessages& m, int e_lj, int j, NodeState xl, bool l_is_root)
{
  if (l_is_root)
    return xl.d == 0 && xl.p != kNone ? 0.0 : kNegInf;
  if (xl.p == kNone)
    return m.B[e_lj];
  if (xl.p == j)
    return m.c(e_lj)[xl.d];
  return m.a(e_lj)[xl.d];
}

}  // namespace detail

/// Recomputes the message on every interior tree edge x -> y straight from
/// the parent/depth constraints, by enumerating the states of x and of each
/// neighbor of x other than y, and compares with the lifted message.
/// Messages out of tree nodes that project onto the root must equal the
/// fixed root message. Leaves are exempt.
inline LiftReport lifted_residual(const CompTree& ct, const LiftedMessages& m, node root,
                                  const std::vector<real>& exclusion)
{
  LiftReport rep;
  const int D = m.depth;
  std::vector<real> a(static_cast<std::size_t>(D + 1)), c(static_cast<std::size_t>(D + 1));
  auto entry = [](real x, real y) {
    if (x == y)
      return 0.0;
    if (x == kNegInf || y == kNegInf)
      return kPosInf;
    return std::abs(x - y);
  };
  auto note = [&](real r, int e) {
    if (r > rep.max_residual || rep.worst_edge < 0) {
      rep.max_residual = std::max(rep.max_residual, r);
      rep.worst_edge = e;
    }
  };
  for (int x = 0; x < ct.size(); ++x) {
    const bool x_root = ct.proj[x] == root;
    for (int ex = ct.offset[x]; ex < ct.offset[x + 1]; ++ex) {
      if (ct.level[x] == ct.radius) {
        ++rep.exempt_edges;
        continue;
      }
      ++rep.checked_edges;
      const int y = ct.nbr[ex];
      if (x_root) {
        real r = entry(m.B[ex], kNegInf);
        for (int d = 0; d <= D; ++d) {
          r = std::max(r, entry(m.a(ex)[d], d == 0 ? 0.0 : kNegInf));
          r = std::max(r, entry(m.c(ex)[d], kNegInf));
        }
        note(r, ex);
        continue;
      }
      std::fill(a.begin(), a.end(), kNegInf);
      std::fill(c.begin(), c.end(), kNegInf);
      real b = kNegInf;
      for (const auto xs : detail::node_states(ct, x, false, D)) {
        real v = xs.p == kNone ? -exclusion[ct.proj[x]] : -ct.cost[ct.slot(x, xs.p)];
        for (int el = ct.offset[x]; el < ct.offset[x + 1] && v != kNegInf; ++el) {
          const int l = ct.nbr[el];
          if (l == y)
            continue;
          const bool l_root = ct.proj[l] == root;
          const int e_lx = ct.slot(l, x);
          real best = kNegInf;
          for (const auto ls : detail::neighbor_states(l, x, l_root, D))
            if (detail::constraint_holds(x, xs, l, ls))
              best = std::max(best, detail::message_value(m, e_lx, x, ls, l_root));
          v = best == kNegInf ? kNegInf : v + best;
        }
        if (xs.p == kNone)
          b = std::max(b, v);
        else if (xs.p == y)
          c[xs.d] = std::max(c[xs.d], v);
        else
          a[xs.d] = std::max(a[xs.d], v);
      }
      real top = b;
      for (int d = 0; d <= D; ++d)
        top = std::max({top, a[d], c[d]});
      real r = 0;
      if (top == kNegInf) {
        r = kPosInf;
      } else {
        r = entry(b - top, m.B[ex]);
        for (int d = 0; d <= D; ++d) {
          r = std::max(r, entry(a[d] - top, m.a(ex)[d]));
          r = std::max(r, entry(c[d] - top, m.c(ex)[d]));
        }
      }
      note(r, ex);
    }
  }
  return rep;
}

/// Lifts a converged gamma = 0 state onto `ct` and reports the interior
/// residual. States that are not fixed points (one more sweep moves them by
/// more than `fixed_point_tol`) or were reinforced are rejected.
inline LiftReport check_lifted_fixed_point(const MessageState& state, const CompTree& ct, real tol,
                                           real fixed_point_tol = 1e-9)
{
  LiftReport rep;
  if (state.gamma != 0) {
    rep.error = "state was reinforced";
    return rep;
  }
  MessageState next = state;
  const real delta = sweep(state, nullptr, 0.0, next);
  if (delta > fixed_point_tol) {
    rep.error = "state is not a fixed point (one more sweep changes it by " + format_real(delta) + ")";
    return rep;
  }
  const Graph& g = state.graph();
  for (int x = 0; x < ct.size(); ++x)
    for (int e = ct.offset[x]; e < ct.offset[x + 1]; ++e) {
      const int ge = g.slot(ct.proj[x], ct.proj[ct.nbr[e]]);
      if (ge < 0 || g.cost[ge] != ct.cost[e]) {
        rep.error = "state and computation tree disagree on edge costs";
        return rep;
      }
    }
  const LiftedMessages m = lift_messages(state, ct);
  rep = lifted_residual(ct, m, state.root(), state.exclusion_costs());
  rep.ok = rep.max_residual <= tol;
  return rep;
}

// ---------------------------------------------------------------------------

struct CostCheck {
  bool evaluated = false;
  bool pass = false;
  real expected = 0;  // cost of the solver output
  real observed = 0;  // cost of the comparison tree
  std::string note;
};

struct CorollaryReport {
  bool preconditions_met = false;
  std::string precondition_failure;
  CostCheck mst;
  CostCheck prune;
  CostCheck oracle;

  bool all_pass() const
  {
    return preconditions_met && mst.pass && prune.pass && (!oracle.evaluated || oracle.pass);
  }
};

/// For a converged, unreinforced, depth-unbounded fixed point and its
/// decoded tree S*: respanning V* with an MST and strong pruning both keep
/// the cost; when V* = V the cost is the rooted optimum.
inline CorollaryReport check_optimality_corollaries(const Instance& inst, const Solution& sol,
                                                    const MessageState& state, real tol = 1e-9)
{
  CorollaryReport rep;
  auto unmet = [&](std::string why) {
    rep.precondition_failure = std::move(why);
    return rep;
  };
  if (state.gamma != 0)
    return unmet("reinforced run");
  if (!sol.converged)
    return unmet("run did not converge");
  if (state.depth() < inst.node_count)
    return unmet("depth bound below node count");
  if (state.root() != sol.root)
    return unmet("state and solution have different roots");
  MessageState next = state;
  if (sweep(state, nullptr, 0.0, next) > 1e-9)
    return unmet("state is not a fixed point");
  const Decisions dec = extract_decisions(node_fields(state));
  if (dec.any_degenerate())
    return unmet("degenerate decisions");
  const Solution decoded = decisions_to_solution(inst, dec, state.depth());
  if (decoded.repaired || decoded.parent != sol.parent)
    return unmet("solution is not the decoding of the fixed point");
  rep.preconditions_met = true;

  const real h = solution_cost(inst, sol);
  const Tree tree = sol.tree();

  rep.mst.evaluated = true;
  rep.mst.expected = h;
  if (auto t = mst_respan(inst, tree.vertices(), tree.root)) {
    rep.mst.observed = tree_cost(inst, *t);
    rep.mst.pass = std::abs(rep.mst.observed - h) <= tol;
  } else {
    rep.mst.note = "vertex set induces a disconnected subgraph";
  }

  rep.prune.evaluated = true;
  rep.prune.expected = h;
  rep.prune.observed = tree_cost(inst, strong_prune(inst, tree));
  rep.prune.pass = std::abs(rep.prune.observed - h) <= tol;

  if (tree.size() == inst.node_count) {
    if (inst.node_count <= kOracleMaxNodes) {
      const OptResult opt = exact_pcst(inst, sol.root);
      rep.oracle.evaluated = true;
      rep.oracle.expected = h;
      rep.oracle.observed = opt.cost;
      rep.oracle.pass = std::abs(opt.cost - h) <= tol;
    } else {
      rep.oracle.note = "instance too large for the oracle";
    }
  } else {
    rep.oracle.note = "tree does not span every node";
  }
  return rep;
}

/// Cheapest tree rooted at sol.root using only vertices of V*. A
/// fixed-point tree must not cost more.
inline OptResult best_subtree_within(const Instance& inst, const Solution& sol)
{
  Instance sub = inst;
  sub.edges.clear();
  for (const auto& e : inst.edges)
    if (sol.parent[e.u] != kNone && sol.parent[e.v] != kNone)
      sub.edges.push_back(e);
  return exact_pcst(sub, sol.root);
}

inline nlohmann::json to_json(const LiftReport& r)
{
  return {{"ok", r.ok},
          {"max_residual", r.max_residual},
          {"checked_edges", r.checked_edges},
          {"exempt_edges", r.exempt_edges},
          {"error", r.error}};
}

inline nlohmann::json to_json(const CostCheck& c)
{
  return {{"evaluated", c.evaluated}, {"pass", c.pass}, {"solver_cost", c.expected}, {"check_cost", c.observed},
          {"note", c.note}};
}

inline nlohmann::json to_json(const CorollaryReport& r)
{
  return {{"preconditions_met", r.preconditions_met},
          {"precondition_failure", r.precondition_failure},
          {"mst_respan", to_json(r.mst)},
          {"strong_prune", to_json(r.prune)},
          {"oracle", to_json(r.oracle)}};
}

}  // namespace pcst

#endif
