#ifndef PCST_MAXSUM_HPP
#define PCST_MAXSUM_HPP

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <memory>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "pcst/common.hpp"
#include "pcst/instance.hpp"
#include "pcst/solution.hpp"

namespace pcst {

// Zero-temperature cavity (Max-Sum) solver for the depth-bounded rooted
// problem.
//
// Every node j carries a state (d_j, p_j): a depth in 1..D and a parent in
// its neighborhood, or p_j = * for nodes outside the tree. The root is frozen
// at depth 0. The message j -> i is the cavity field of j with i removed and
// is stored in compressed form per directed edge:
//
//   A[d]  best field with j at depth d pointing to some k != i
//   B     field for p_j = *
//   C[d]  field for j at depth d pointing to i
//
// plus the derived quantities D = max(max_d A[d], B) and
// E[d] = max(C[d+1], D), which are what the receiving node consumes.

struct SolverConfig {
  int depth_bound = 0;  // 0: use node_count
  real rho = 1e-4;      // reinforcement slope
  int max_sweeps = 120000;
  real msg_tol = 1e-10;
  int stable_sweeps = 30;
  std::uint64_t seed = 0;
  real noise_eps = 1e-7;
  real cost_noise = 1e-7;  // tie-breaking offset added to edge costs inside the solver
  int threads = 1;

  int depth_for(int node_count) const { return depth_bound > 0 ? depth_bound : std::max(1, node_count); }
};

class MessageState {
public:
  MessageState() = default;

  MessageState(std::shared_ptr<const Graph> graph, std::vector<real> exclusion, node root, int depth)
      : graph_(std::move(graph)), exclusion_(std::move(exclusion)), root_(root), depth_(depth)
  {
    const auto cells = static_cast<std::size_t>(graph_->directed_edge_count()) * width();
    A_.assign(cells, kNegInf);
    C_.assign(cells, kNegInf);
    E_.assign(cells, kNegInf);
    B_.assign(static_cast<std::size_t>(graph_->directed_edge_count()), kNegInf);
    Dm_.assign(static_cast<std::size_t>(graph_->directed_edge_count()), kNegInf);
  }

  const Graph& graph() const { return *graph_; }
  const std::shared_ptr<const Graph>& graph_ptr() const { return graph_; }
  node root() const { return root_; }
  int depth() const { return depth_; }
  int width() const { return depth_ + 1; }
  real exclusion_cost(node j) const { return exclusion_[j]; }
  const std::vector<real>& exclusion_costs() const { return exclusion_; }

  std::span<real> A(int e) { return {A_.data() + offset(e), static_cast<std::size_t>(width())}; }
  std::span<real> C(int e) { return {C_.data() + offset(e), static_cast<std::size_t>(width())}; }
  std::span<real> E(int e) { return {E_.data() + offset(e), static_cast<std::size_t>(width())}; }
  std::span<const real> A(int e) const { return {A_.data() + offset(e), static_cast<std::size_t>(width())}; }
  std::span<const real> C(int e) const { return {C_.data() + offset(e), static_cast<std::size_t>(width())}; }
  std::span<const real> E(int e) const { return {E_.data() + offset(e), static_cast<std::size_t>(width())}; }
  real& B(int e) { return B_[e]; }
  real B(int e) const { return B_[e]; }
  real& Dmsg(int e) { return Dm_[e]; }
  real Dmsg(int e) const { return Dm_[e]; }

  /// Sweeps performed so far and the reinforcement strength of the last one.
  long sweeps = 0;
  real gamma = 0;

  /// Recomputes Dmsg and E of edge e from its A, B, C.
  void derive(int e)
  {
    auto a = A(e);
    auto c = C(e);
    auto ee = E(e);
    real dm = B_[e];
    for (real x : a)
      dm = std::max(dm, x);
    Dm_[e] = dm;
    const int D = depth_;
    for (int d = 0; d < D; ++d)
      ee[d] = std::max(c[d + 1], dm);
    ee[D] = dm;
  }

  /// Shifts the block of edge e so that its largest entry is 0.
  void normalize(int e)
  {
    auto a = A(e);
    auto c = C(e);
    real m = B_[e];
    for (int d = 0; d < width(); ++d)
      m = std::max({m, a[d], c[d]});
    if (m == kNegInf)
      return;
    for (int d = 0; d < width(); ++d) {
      a[d] -= m;
      c[d] -= m;
    }
    B_[e] -= m;
  }

  /// Fixed root boundary: the root sits at depth 0 and points to nobody.
  void set_root_message(int e)
  {
    auto a = A(e);
    auto c = C(e);
    std::fill(a.begin(), a.end(), kNegInf);
    std::fill(c.begin(), c.end(), kNegInf);
    a[0] = 0;
    B_[e] = kNegInf;
    derive(e);
  }

  bool same_shape(const MessageState& o) const
  {
    return graph_ == o.graph_ && root_ == o.root_ && depth_ == o.depth_;
  }

private:
  std::size_t offset(int e) const { return static_cast<std::size_t>(e) * static_cast<std::size_t>(width()); }

  std::shared_ptr<const Graph> graph_;
  std::vector<real> exclusion_;
  node root_ = 0;
  int depth_ = 1;
  std::vector<real> A_, C_, E_, B_, Dm_;
};

/// Total fields of every node. F(e, d) is the field for j = owner(e) sitting
/// at depth d with parent nbr(e); G(j) the field for p_j = *. Each non-root
/// node is normalized so its largest entry is 0. The root's only state
/// (depth 0, no parent) has field 0 and is not stored.
struct NodeFields {
  std::shared_ptr<const Graph> graph;
  node root = 0;
  int depth = 1;
  std::vector<real> F;  // directed_edge_count * (depth + 1)
  std::vector<real> G;  // per node

  int width() const { return depth + 1; }
  std::span<const real> at(int e) const
  {
    return {F.data() + static_cast<std::size_t>(e) * width(), static_cast<std::size_t>(width())};
  }
  std::span<real> at(int e)
  {
    return {F.data() + static_cast<std::size_t>(e) * width(), static_cast<std::size_t>(width())};
  }
};

/// Argmax decisions per node. parent == kNone encodes p = *; the root points
/// to itself with depth 0.
struct Decisions {
  node root = 0;
  std::vector<node> parent;
  std::vector<int> depth;
  std::vector<char> degenerate;

  bool same_choice(const Decisions& o) const { return parent == o.parent && depth == o.depth; }
  bool any_degenerate() const { return std::find(degenerate.begin(), degenerate.end(), 1) != degenerate.end(); }
};

struct SolveStats {
  int sweeps_used = 0;
  bool converged = false;
  real final_gamma = 0;
  real final_delta = kPosInf;
  double wall_time = 0;
};

// ---------------------------------------------------------------------------

inline MessageState init_state(std::shared_ptr<const Graph> graph, std::vector<real> exclusion, node root,
                               const SolverConfig& cfg)
{
  if (root < 0 || root >= graph->n)
    throw Error("root " + std::to_string(root) + " is not a node");
  const int D = cfg.depth_for(graph->n);
  MessageState s(std::move(graph), std::move(exclusion), root, D);
  const Graph& g = s.graph();
  Rng rng(cfg.seed);
  auto noise = [&] { return cfg.noise_eps == 0 ? 0.0 : rng.uniform(-cfg.noise_eps, cfg.noise_eps); };
  for (int e = 0; e < g.directed_edge_count(); ++e) {
    if (g.owner[e] == root) {
      s.set_root_message(e);
      continue;
    }
    auto a = s.A(e);
    auto c = s.C(e);
    a[0] = kNegInf;
    c[0] = kNegInf;
    for (int d = 1; d <= D; ++d) {
      a[d] = noise();
      c[d] = noise();
    }
    s.B(e) = noise();
    s.normalize(e);
    s.derive(e);
  }
  return s;
}

/// Graph of `inst` with every edge cost raised by a seeded uniform offset in
/// [0, amplitude), the same for both orientations. Integer costs make many
/// trees cost the same; exact ties survive to the fixed point and leave the
/// argmax decisions inconsistent with each other.
inline Graph perturbed_graph(const Instance& inst, real amplitude, std::uint64_t seed)
{
  Graph g(inst);
  if (amplitude == 0)
    return g;
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int e = 0; e < g.directed_edge_count(); ++e)
    if (e < g.rev[e]) {
      const real x = amplitude * rng.uniform01();
      g.cost[e] += x;
      g.cost[g.rev[e]] += x;
    }
  return g;
}

inline MessageState init_state(const Instance& inst, node root, const SolverConfig& cfg)
{
  std::vector<real> excl(static_cast<std::size_t>(inst.node_count));
  for (node j = 0; j < inst.node_count; ++j)
    excl[j] = inst.exclusion_cost(j);
  return init_state(std::make_shared<const Graph>(perturbed_graph(inst, cfg.cost_noise, cfg.seed)), std::move(excl),
                    root, cfg);
}

namespace detail {

inline real entry_delta(real a, real b)
{
  if (a == b)
    return 0;
  if (a == kNegInf || b == kNegInf)
    return kPosInf;
  return std::abs(a - b);
}

/// Runs fn(first, last) over [0, n) split in `threads` contiguous chunks and
/// returns the per-chunk results in chunk order.
template <typename Fn>
std::vector<real> for_chunks(int n, int threads, Fn&& fn)
{
  threads = std::max(1, std::min(threads, n));
  std::vector<real> out(static_cast<std::size_t>(threads), 0.0);
  if (threads == 1) {
    out[0] = fn(0, n);
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    const int first = static_cast<int>(static_cast<long>(n) * t / threads);
    const int last = static_cast<int>(static_cast<long>(n) * (t + 1) / threads);
    pool.emplace_back([&out, &fn, t, first, last] { out[t] = fn(first, last); });
  }
  pool.clear();
  return out;
}

struct SweepScratch {
  std::vector<real> sum_e, best, second;
  std::vector<int> best_slot;
  std::vector<real> a, c;
  explicit SweepScratch(int width)
      : sum_e(width), best(width), second(width), best_slot(width), a(width), c(width) {}
};

/// Recomputes every message leaving node j. Returns the largest entry change.
inline real update_node(const MessageState& cur, const NodeFields* fields, real gamma, node j, MessageState& next,
                        SweepScratch& sc)
{
  const Graph& g = cur.graph();
  const int first = g.offset[j];
  const int last = g.offset[j + 1];
  if (first == last)
    return 0;
  const int D = cur.depth();
  real delta = 0;

  if (j == cur.root()) {
    for (int e = first; e < last; ++e)
      next.set_root_message(e);
    return delta;
  }

  // full sums over the neighborhood; the cavity sums subtract one term
  std::fill(sc.sum_e.begin(), sc.sum_e.end(), 0.0);
  real sum_d = 0;
  for (int e = first; e < last; ++e) {
    const int in = g.rev[e];
    auto ein = cur.E(in);
    for (int d = 1; d <= D; ++d)
      sc.sum_e[d] += ein[d];
    sum_d += cur.Dmsg(in);
  }

  // best and second best of  -c_jk - E_kj[d] + A_kj[d-1] + gamma F_jk[d]
  std::fill(sc.best.begin(), sc.best.end(), kNegInf);
  std::fill(sc.second.begin(), sc.second.end(), kNegInf);
  std::fill(sc.best_slot.begin(), sc.best_slot.end(), -1);
  for (int e = first; e < last; ++e) {
    const int in = g.rev[e];
    auto ein = cur.E(in);
    auto ain = cur.A(in);
    const real cjk = g.cost[e];
    for (int d = 1; d <= D; ++d) {
      real v = ain[d - 1] - cjk - ein[d];
      if (fields)
        v += scaled(gamma, fields->at(e)[d]);
      if (v > sc.best[d]) {
        sc.second[d] = sc.best[d];
        sc.best[d] = v;
        sc.best_slot[d] = e;
      } else if (v > sc.second[d]) {
        sc.second[d] = v;
      }
    }
  }

  const real g_field = fields ? scaled(gamma, fields->G[j]) : 0.0;
  for (int e = first; e < last; ++e) {
    const int in = g.rev[e];
    auto ein = cur.E(in);
    const real cji = g.cost[e];
    auto& a = sc.a;
    auto& c = sc.c;
    a[0] = kNegInf;
    c[0] = kNegInf;
    real m = -cur.exclusion_cost(j) + (sum_d - cur.Dmsg(in)) + g_field;
    const real b = m;
    for (int d = 1; d <= D; ++d) {
      const real cavity = sc.sum_e[d] - ein[d];
      const real pick = sc.best_slot[d] == e ? sc.second[d] : sc.best[d];
      a[d] = cavity + pick;
      c[d] = cavity - cji;
      if (fields)
        c[d] += scaled(gamma, fields->at(e)[d]);
      m = std::max({m, a[d], c[d]});
    }
    auto na = next.A(e);
    auto nc = next.C(e);
    auto oa = cur.A(e);
    auto oc = cur.C(e);
    for (int d = 0; d <= D; ++d) {
      na[d] = a[d] - m;
      nc[d] = c[d] - m;
      delta = std::max({delta, entry_delta(na[d], oa[d]), entry_delta(nc[d], oc[d])});
    }
    next.B(e) = b - m;
    delta = std::max(delta, entry_delta(next.B(e), cur.B(e)));
    next.derive(e);
  }
  return delta;
}

}  // namespace detail

/// One synchronous sweep: every message of `next` is computed from `cur`
/// (and the generation-t fields when gamma > 0). Returns the largest
/// absolute entry change. `next` must have the same shape as `cur`.
inline real sweep(const MessageState& cur, const NodeFields* fields, real gamma, MessageState& next, int threads = 1)
{
  if (!cur.same_shape(next))
    next = cur;
  const int n = cur.graph().n;
  const int width = cur.width();
  auto deltas = detail::for_chunks(n, threads, [&](int first, int last) {
    detail::SweepScratch sc(width);
    real d = 0;
    for (node j = first; j < last; ++j)
      d = std::max(d, detail::update_node(cur, fields, gamma, j, next, sc));
    return d;
  });
  next.sweeps = cur.sweeps + 1;
  next.gamma = gamma;
  return *std::max_element(deltas.begin(), deltas.end());
}

inline std::pair<MessageState, real> sweep(const MessageState& state, const NodeFields& fields, real gamma,
                                           int threads = 1)
{
  MessageState next = state;
  real delta = sweep(state, &fields, gamma, next, threads);
  return {std::move(next), delta};
}

namespace detail {

inline void normalize_node(NodeFields& f, node j)
{
  const Graph& g = *f.graph;
  real m = f.G[j];
  for (int e = g.offset[j]; e < g.offset[j + 1]; ++e)
    for (real x : f.at(e))
      m = std::max(m, x);
  if (m == kNegInf)
    return;
  f.G[j] -= m;
  for (int e = g.offset[j]; e < g.offset[j + 1]; ++e)
    for (real& x : f.at(e))
      x -= m;
}

}  // namespace detail

/// Total fields of the state, reinforced as F(t+1) = F_raw(t) + gamma F(t)
/// when `previous` is given and gamma > 0.
inline NodeFields node_fields(const MessageState& s, const NodeFields* previous = nullptr, real gamma = 0,
                              int threads = 1)
{
  const Graph& g = s.graph();
  const int D = s.depth();
  NodeFields f;
  f.graph = s.graph_ptr();
  f.root = s.root();
  f.depth = D;
  f.F.assign(static_cast<std::size_t>(g.directed_edge_count()) * f.width(), kNegInf);
  f.G.assign(static_cast<std::size_t>(g.n), kNegInf);
  const bool reinforce = previous && gamma != 0;

  detail::for_chunks(g.n, threads, [&](int first, int last) {
    std::vector<real> sum_e(static_cast<std::size_t>(D + 1));
    for (node j = first; j < last; ++j) {
      if (j == s.root())
        continue;
      std::fill(sum_e.begin(), sum_e.end(), 0.0);
      real sum_d = 0;
      for (int e = g.offset[j]; e < g.offset[j + 1]; ++e) {
        auto ein = s.E(g.rev[e]);
        for (int d = 1; d <= D; ++d)
          sum_e[d] += ein[d];
        sum_d += s.Dmsg(g.rev[e]);
      }
      f.G[j] = -s.exclusion_cost(j) + sum_d;
      if (reinforce)
        f.G[j] += scaled(gamma, previous->G[j]);
      for (int e = g.offset[j]; e < g.offset[j + 1]; ++e) {
        const int in = g.rev[e];
        auto ein = s.E(in);
        auto ain = s.A(in);
        auto fe = f.at(e);
        fe[0] = kNegInf;
        for (int d = 1; d <= D; ++d) {
          fe[d] = sum_e[d] - ein[d] - g.cost[e] + ain[d - 1];
          if (reinforce)
            fe[d] += scaled(gamma, previous->at(e)[d]);
        }
      }
      detail::normalize_node(f, j);
    }
    return 0.0;
  });
  return f;
}

/// Per-node argmax of the fields. Ties go to *, then to the lowest neighbor
/// index, then to the smaller depth. A node is flagged degenerate when its
/// two best entries are closer than `tol`.
inline Decisions extract_decisions(const NodeFields& f, real tol = 1e-10)
{
  const Graph& g = *f.graph;
  Decisions out;
  out.root = f.root;
  out.parent.assign(static_cast<std::size_t>(g.n), kNone);
  out.depth.assign(static_cast<std::size_t>(g.n), 0);
  out.degenerate.assign(static_cast<std::size_t>(g.n), 0);
  for (node j = 0; j < g.n; ++j) {
    if (j == f.root) {
      out.parent[j] = j;
      continue;
    }
    real best = f.G[j];
    real second = kNegInf;
    node bp = kNone;
    int bd = 0;
    for (int e = g.offset[j]; e < g.offset[j + 1]; ++e) {
      auto fe = f.at(e);
      for (int d = 1; d <= f.depth; ++d) {
        const real v = fe[d];
        if (v > best) {
          second = best;
          best = v;
          bp = g.nbr[e];
          bd = d;
        } else if (v > second) {
          second = v;
        }
      }
    }
    out.parent[j] = bp;
    out.depth[j] = bp == kNone ? 0 : bd;
    out.degenerate[j] = (best - second) < tol ? 1 : 0;
  }
  return out;
}

/// Builds the induced subgraph from decisions. Pointer chains that close a
/// cycle, end at an excluded node or exceed `depth_bound` are cut: those
/// nodes are moved to * and the solution is flagged repaired.
inline Solution decisions_to_solution(const Instance& inst, const Graph& g, const Decisions& dec, int depth_bound)
{
  const int n = inst.node_count;
  const node root = dec.root;
  Solution s;
  s.root = root;
  s.parent = dec.parent;
  s.depth.assign(static_cast<std::size_t>(n), -1);
  std::vector<char> done(static_cast<std::size_t>(n), 0), on_path(static_cast<std::size_t>(n), 0);
  std::vector<node> path;
  for (node v = 0; v < n; ++v) {
    if (done[v])
      continue;
    path.clear();
    node u = v;
    while (!done[u] && !on_path[u]) {
      on_path[u] = 1;
      path.push_back(u);
      if (u == root || s.parent[u] == kNone)
        break;
      u = s.parent[u];
    }
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      const node x = *it;
      const node p = s.parent[x];
      int d = -1;
      if (x == root) {
        d = 0;
      } else if (p == kNone) {
        d = -1;
      } else if (!done[p] || s.depth[p] < 0 || s.depth[p] + 1 > depth_bound || g.slot(x, p) < 0) {
        s.repaired = true;
        d = -1;
      } else {
        d = s.depth[p] + 1;
      }
      s.depth[x] = d;
      if (d < 0)
        s.parent[x] = kNone;
      done[x] = 1;
      on_path[x] = 0;
    }
  }
  s.parent[root] = root;
  s.cost = assignment_cost(inst, g, s.parent, root);
  return s;
}

inline Solution decisions_to_solution(const Instance& inst, const Decisions& dec, int depth_bound)
{
  return decisions_to_solution(inst, Graph(inst), dec, depth_bound);
}

/// Everything a rooted run produces. `solution` is the returned answer (the
/// lowest-cost decoded snapshot, preferring the final one on ties);
/// `final_solution` is the decoding of the last sweep.
struct RootedRun {
  Solution solution;
  Solution final_solution;
  SolveStats stats;
  MessageState state;
  NodeFields fields;
};

/// Iterates sweeps until the messages reach a fixed point, or, once
/// reinforcement is active, until decisions stay unchanged for
/// cfg.stable_sweeps sweeps. Reinforcement starts when the message change
/// has not reached a new minimum for cfg.stable_sweeps sweeps, or when the
/// decisions have already been stable that long; from then on
/// gamma grows linearly by cfg.rho per sweep. rho = 0 disables it.
// relative drop in the message change that counts as progress
inline constexpr real kDeltaProgress = 1e-3;

inline RootedRun solve_rooted(const Instance& inst, node root, const SolverConfig& cfg)
{
  using clock = std::chrono::steady_clock;
  require_valid(inst);
  const auto t0 = clock::now();
  RootedRun run;
  MessageState cur = init_state(inst, root, cfg);
  const Graph g(inst);
  const int D = cur.depth();
  MessageState next = cur;
  NodeFields fields = node_fields(cur, nullptr, 0, cfg.threads);

  real best_delta = kPosInf;
  int last_improvement = 0;
  bool reinforcing = false;
  int switch_at = 0;
  real gamma = 0;
  int stable = 0;
  Decisions prev;
  Solution best;
  bool have_best = false;

  int t = 0;
  real delta = kPosInf;
  bool converged = false;
  while (t < cfg.max_sweeps) {
    ++t;
    delta = sweep(cur, &fields, gamma, next, cfg.threads);
    NodeFields nf = node_fields(cur, &fields, gamma, cfg.threads);
    std::swap(cur, next);
    fields = std::move(nf);

    Decisions dec = extract_decisions(fields, cfg.msg_tol);
    Solution sol = decisions_to_solution(inst, g, dec, D);
    if (!have_best || sol.cost < best.cost) {
      best = sol;
      have_best = true;
    }
    stable = (t > 1 && dec.same_choice(prev)) ? stable + 1 : 0;
    prev = std::move(dec);
    run.final_solution = std::move(sol);

    if (delta <= cfg.msg_tol || (reinforcing && stable >= cfg.stable_sweeps)) {
      converged = true;
      break;
    }
    if (!reinforcing) {
      if (delta < best_delta * (1 - kDeltaProgress)) {
        best_delta = delta;
        last_improvement = t;
      }
      if (cfg.rho > 0 && (t - last_improvement >= cfg.stable_sweeps || stable >= cfg.stable_sweeps)) {
        reinforcing = true;
        switch_at = t;
        stable = 0;
      }
    }
    gamma = reinforcing ? (t - switch_at + 1) * cfg.rho : 0.0;
  }

  if (converged && run.final_solution.cost <= best.cost)
    best = run.final_solution;
  run.stats.sweeps_used = t;
  run.stats.converged = converged;
  run.stats.final_gamma = cur.gamma;
  run.stats.final_delta = delta;
  run.stats.wall_time = std::chrono::duration<double>(clock::now() - t0).count();
  for (Solution* s : {&best, &run.final_solution}) {
    s->converged = converged;
    s->sweeps_used = t;
  }
  run.solution = std::move(best);
  run.state = std::move(cur);
  run.fields = std::move(fields);
  return run;
}

}  // namespace pcst

#endif
