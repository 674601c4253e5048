#ifndef PCST_ROOTING_HPP
#define PCST_ROOTING_HPP

#include <algorithm>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "pcst/common.hpp"
#include "pcst/instance.hpp"
#include "pcst/maxsum.hpp"

namespace pcst {

// Unrooted problems are reduced to rooted ones through a virtual root: an
// extra node joined to every original node at a uniform cost mu, so large
// that the lone virtual root is the optimum. The field of node j for "parent
// is the virtual root, depth 1" then prices the best tree rooted at j, and
// the cheapest such j becomes the root of a second, ordinary solve.

struct RootScores {
  std::vector<real> alpha;  // per original node, +inf when unreachable
  node best_root = 0;
  real mu_used = 0;

  /// Nodes by increasing alpha, ties by index.
  std::vector<node> ranking() const
  {
    std::vector<node> order(alpha.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [this](node a, node b) { return alpha[a] < alpha[b]; });
    return order;
  }
};

inline real default_mu(const Instance& inst)
{
  return inst.total_edge_cost() + inst.lambda * inst.total_prize() + 1.0;
}

/// Returns the instance plus a virtual root (index node_count, prize 0)
/// adjacent to every original node with cost mu.
inline std::pair<Instance, real> augment_virtual_root(const Instance& inst, std::optional<real> mu = std::nullopt)
{
  const real m = mu.value_or(default_mu(inst));
  Instance aug = inst;
  aug.name = inst.name + "+root";
  const node r = inst.node_count;
  aug.node_count = inst.node_count + 1;
  aug.prizes.push_back(0.0);
  for (node j = 0; j < inst.node_count; ++j)
    aug.add_edge(j, r, m);
  return {std::move(aug), m};
}

/// alpha_j = -F_{j r}[1]; the smallest alpha picks the root (lowest index on ties).
inline RootScores root_scores(const NodeFields& fields, node r, real mu = 0)
{
  const Graph& g = *fields.graph;
  RootScores out;
  out.mu_used = mu;
  out.alpha.assign(static_cast<std::size_t>(r), kPosInf);
  for (node j = 0; j < r; ++j) {
    const int e = g.slot(j, r);
    if (e >= 0 && fields.depth >= 1) {
      const real f = fields.at(e)[1];
      out.alpha[j] = f == kNegInf ? kPosInf : -f;
    }
  }
  out.best_root = 0;
  for (node j = 1; j < r; ++j)
    if (out.alpha[j] < out.alpha[out.best_root])
      out.best_root = j;
  return out;
}

struct PcstOptions {
  std::optional<node> root;  // bypass root selection
  std::optional<real> mu;    // override the virtual-root edge cost
  // The alpha fields are exact only where Max-Sum is (trees); on loopy
  // graphs the runner-up roots are often the right ones. The lowest-alpha
  // candidates are each solved and the cheapest result kept. 1 = single solve.
  int root_candidates = 3;
};

struct PcstRun {
  Solution solution;
  SolveStats stats;
  node root = 0;
  bool short_circuit = false;
  std::optional<RootScores> scores;
  SolveStats selection_stats;
  RootedRun rooted;
};

/// A node whose scaled prize exceeds the total edge cost belongs to every
/// optimal tree; the one with the largest prize (lowest index on ties).
inline std::optional<node> forced_root(const Instance& inst)
{
  const real total = inst.total_edge_cost();
  std::optional<node> pick;
  for (node j = 0; j < inst.node_count; ++j)
    if (inst.exclusion_cost(j) > total && (!pick || inst.prizes[j] > inst.prizes[*pick]))
      pick = j;
  return pick;
}

/// Unrooted solve: pick a root, then run the rooted solver from it.
inline PcstRun solve_pcst(const Instance& inst, const SolverConfig& cfg, const PcstOptions& opt = {})
{
  require_valid(inst);
  if (inst.node_count < 1)
    throw Error("solve_pcst: empty instance");
  PcstRun out;
  std::vector<node> candidates;
  if (opt.root) {
    out.root = *opt.root;
  } else if (auto forced = forced_root(inst)) {
    out.root = *forced;
    out.short_circuit = true;
  } else if (inst.node_count == 1) {
    out.root = 0;
  } else {
    auto [aug, mu] = augment_virtual_root(inst, opt.mu);
    SolverConfig aug_cfg = cfg;
    aug_cfg.depth_bound = cfg.depth_for(inst.node_count) + 1;
    RootedRun sel = solve_rooted(aug, inst.node_count, aug_cfg);
    out.scores = root_scores(sel.fields, inst.node_count, mu);
    out.root = out.scores->best_root;
    out.selection_stats = sel.stats;
    candidates = out.scores->ranking();
    candidates.resize(std::min<std::size_t>(candidates.size(), std::max(1, opt.root_candidates)));
  }
  if (candidates.empty())
    candidates.push_back(out.root);

  SolveStats extra;
  bool first = true;
  for (node r : candidates) {
    RootedRun run = solve_rooted(inst, r, cfg);
    extra.sweeps_used += run.stats.sweeps_used;
    extra.wall_time += run.stats.wall_time;
    if (first || run.solution.cost < out.rooted.solution.cost) {
      out.rooted = std::move(run);
      out.root = r;
    }
    first = false;
  }
  out.solution = out.rooted.solution;
  out.stats = out.rooted.stats;
  out.stats.sweeps_used = extra.sweeps_used + out.selection_stats.sweeps_used;
  out.stats.wall_time = extra.wall_time + out.selection_stats.wall_time;
  return out;
}

}  // namespace pcst

#endif
