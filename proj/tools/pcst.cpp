#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pcst/pcst.hpp"

using namespace pcst;
using nlohmann::json;

namespace {

struct Options {
  SolverConfig cfg;
  std::optional<real> lambda;
  std::optional<int> root;
  std::optional<real> mu;
  int root_candidates = 3;
  std::string post = "none";
  std::string format;
  std::string out;
};

void add_solver_flags(CLI::App* app, Options& o)
{
  app->add_option("--depth", o.cfg.depth_bound, "depth bound D (0: number of nodes)");
  app->add_option("--rho", o.cfg.rho, "reinforcement slope")->capture_default_str();
  app->add_option("--max-sweeps", o.cfg.max_sweeps, "sweep limit")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--tol", o.cfg.msg_tol, "message convergence tolerance")->capture_default_str();
  app->add_option("--stable", o.cfg.stable_sweeps, "decision stability window")->capture_default_str();
  app->add_option("--seed", o.cfg.seed, "noise seed")->capture_default_str();
  app->add_option("--noise", o.cfg.noise_eps, "initial message noise amplitude")->capture_default_str();
  app->add_option("--cost-noise", o.cfg.cost_noise, "edge cost tie-breaking amplitude")->capture_default_str();
  app->add_option("--threads", o.cfg.threads, "worker threads per sweep")->capture_default_str();
  app->add_option("--lambda", o.lambda, "override the prize multiplier");
  app->add_option("--root", o.root, "fixed root (skips root selection)");
  app->add_option("--mu", o.mu, "virtual root edge cost");
  app->add_option("--root-candidates", o.root_candidates, "roots re-solved after selection")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out)
{
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f)
    throw Error("cannot write " + out);
  f << text;
}

Instance load(const std::string& path, const Options& o)
{
  const Format f = o.format.empty() ? format_from_path(path) : (o.format == "json" ? Format::json : Format::stp);
  std::vector<std::string> warnings;
  Instance inst = parse_instance(read_file(path), f, &warnings);
  for (const auto& w : warnings)
    std::cerr << "warning: " << w << "\n";
  if (o.lambda)
    inst.lambda = *o.lambda;
  return inst;
}

PcstOptions pcst_options(const Options& o)
{
  PcstOptions p;
  p.root = o.root;
  p.mu = o.mu;
  p.root_candidates = o.root_candidates;
  return p;
}

int cmd_solve(const std::string& path, const Options& o)
{
  const Instance inst = load(path, o);
  PcstRun run = solve_pcst(inst, o.cfg, pcst_options(o));
  Solution sol = run.solution;
  json j = solution_to_json(sol);
  j["instance"] = inst.name;
  j["vertices"] = sol.vertex_set();
  j["cost_offset_form"] = sol.cost - inst.lambda * inst.total_prize();
  j["time_s"] = run.stats.wall_time;
  j["root_selected"] = !o.root && !run.short_circuit && inst.node_count > 1;
  if (o.post != "none") {
    const Tree t = post_process(inst, sol.tree(), o.post == "mst" || o.post == "both",
                                o.post == "prune" || o.post == "both");
    json p = tree_to_json(t);
    p["cost"] = tree_cost(inst, t);
    p["steps"] = o.post;
    j["post"] = p;
  }
  emit(j.dump(1) + "\n", o.out);
  return 0;
}

int cmd_generate(const std::string& spec, const Options& o)
{
  Instance inst = generate(parse_class_spec(spec), o.cfg.seed);
  if (o.lambda)
    inst.lambda = *o.lambda;
  const Format f = o.format == "json" ? Format::json : Format::stp;
  emit(write_instance(inst, f), o.out);
  return 0;
}

int cmd_oracle(const std::string& path, const Options& o)
{
  const Instance inst = load(path, o);
  std::optional<int> depth;
  if (o.cfg.depth_bound > 0)
    depth = o.cfg.depth_bound;
  const OptResult best = exact_pcst(inst, o.root, depth);
  json j{{"instance", inst.name},
         {"cost", best.cost},
         {"tree", tree_to_json(best.tree)},
         {"nodes_explored", best.nodes_explored}};
  emit(j.dump(1) + "\n", o.out);
  return 0;
}

int cmd_verify(const std::string& path, const Options& o)
{
  const Instance inst = load(path, o);
  SolverConfig cfg = o.cfg;
  cfg.depth_bound = inst.node_count;
  cfg.rho = 0;
  cfg.cost_noise = 0;
  const node root = o.root ? *o.root : solve_pcst(inst, o.cfg, pcst_options(o)).root;
  RootedRun run = solve_rooted(inst, root, cfg);
  json j{{"instance", inst.name}, {"root", root}, {"cost", run.solution.cost},
         {"converged", run.stats.converged}, {"sweeps", run.stats.sweeps_used}};
  bool failed = false;

  const CorollaryReport cor = check_optimality_corollaries(inst, run.solution, run.state);
  j["corollaries"] = to_json(cor);
  failed |= cor.preconditions_met && !cor.all_pass();

  if (run.stats.converged) {
    try {
      const CompTree ct = computation_tree(inst, root, inst.node_count + 1);
      const LiftReport lift = check_lifted_fixed_point(run.state, ct, 1e-9);
      j["lifting"] = to_json(lift);
      j["lifting"]["tree_nodes"] = ct.size();
      failed |= lift.error.empty() && !lift.ok;
    } catch (const Error& e) {
      j["lifting"] = {{"error", e.what()}};
    }
  } else {
    j["lifting"] = {{"error", "run did not converge"}};
  }

  if (run.stats.converged && inst.node_count <= kOracleMaxNodes) {
    const OptResult sub = best_subtree_within(inst, run.solution);
    const bool ok = run.solution.cost <= sub.cost + 1e-9;
    j["subtree_bound"] = {{"pass", ok}, {"solver_cost", run.solution.cost}, {"best_within_vertex_set", sub.cost}};
    failed |= !ok;
  }
  emit(j.dump(1) + "\n", o.out);
  return failed ? 2 : 0;
}

int cmd_bench(const std::string& path, const Options& o)
{
  const Suite suite = parse_suite(read_file(path));
  SolverConfig cfg = o.cfg;
  const BenchResult res = run_bench(suite, cfg, pcst_options(o));
  if (o.format == "json") {
    json rows = json::array();
    for (const auto& r : res.rows) {
      json x{{"name", r.name},     {"class", r.cls},         {"n", r.n},
             {"m", r.m},           {"cost", r.cost},         {"sweeps", r.sweeps},
             {"time_s", r.time_s}, {"converged", r.converged}, {"solution_fraction", r.solution_fraction},
             {"error", r.error}};
      if (r.bound)
        x["bound"] = *r.bound;
      if (r.gap)
        x["gap"] = *r.gap;
      rows.push_back(x);
    }
    json classes = json::array();
    for (const auto& c : res.classes)
      classes.push_back(to_json(c));
    emit(json{{"suite", suite.name}, {"rows", rows}, {"classes", classes}}.dump(1) + "\n", o.out);
  } else {
    emit(bench_csv(res.rows), o.out);
    for (const auto& c : res.classes)
      std::cerr << c.cls << ": rows " << c.rows << ", failures " << c.failures << ", mean cost "
                << format_real(c.mean_cost) << ", mean fraction " << format_real(c.mean_fraction)
                << ", mean time " << format_real(c.mean_time_s) << " s"
                << (c.with_gap ? ", mean gap " + format_real(c.mean_gap) + " %" : std::string()) << "\n";
  }
  return res.any_failure() ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Prize-collecting Steiner tree solver"};
  app.require_subcommand(1);
  Options o;
  std::string target;

  auto* solve = app.add_subcommand("solve", "solve an instance file");
  solve->add_option("file", target, "instance (.stp or .json)")->required();
  add_solver_flags(solve, o);
  solve->add_option("--post", o.post, "post-processing")->check(CLI::IsMember({"none", "prune", "mst", "both"}));
  solve->add_option("--format", o.format, "input format")->check(CLI::IsMember({"stp", "json"}));
  solve->add_option("--out", o.out, "output file");

  auto* gen = app.add_subcommand("generate", "generate an instance");
  gen->add_option("spec", target, "class spec, e.g. R:n=200,nu=8,lambda=1.5")->required();
  gen->add_option("--seed", o.cfg.seed, "generator seed")->capture_default_str();
  gen->add_option("--lambda", o.lambda, "override the prize multiplier");
  gen->add_option("--format", o.format, "output format")->check(CLI::IsMember({"stp", "json"}));
  gen->add_option("--out", o.out, "output file");

  auto* orc = app.add_subcommand("oracle", "exact optimum of a small instance");
  orc->add_option("file", target, "instance (.stp or .json)")->required();
  orc->add_option("--root", o.root, "fixed root");
  orc->add_option("--depth", o.cfg.depth_bound, "depth bound");
  orc->add_option("--lambda", o.lambda, "override the prize multiplier");
  orc->add_option("--format", o.format, "input format")->check(CLI::IsMember({"stp", "json"}));
  orc->add_option("--out", o.out, "output file");

  auto* ver = app.add_subcommand("verify", "fixed-point and optimality checks");
  ver->add_option("file", target, "instance (.stp or .json)")->required();
  add_solver_flags(ver, o);
  ver->add_option("--format", o.format, "input format")->check(CLI::IsMember({"stp", "json"}));
  ver->add_option("--out", o.out, "output file");

  auto* bench = app.add_subcommand("bench", "run a benchmark suite");
  bench->add_option("suite", target, "suite description (.json)")->required();
  add_solver_flags(bench, o);
  bench->add_option("--format", o.format, "report format")->check(CLI::IsMember({"csv", "json"}));
  bench->add_option("--out", o.out, "output file");

  CLI11_PARSE(app, argc, argv);
  try {
    if (solve->parsed())
      return cmd_solve(target, o);
    if (gen->parsed())
      return cmd_generate(target, o);
    if (orc->parsed())
      return cmd_oracle(target, o);
    if (ver->parsed())
      return cmd_verify(target, o);
    return cmd_bench(target, o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
