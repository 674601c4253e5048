#ifndef PCST_BENCH_HPP
#define PCST_BENCH_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcst/common.hpp"
#include "pcst/generate.hpp"
#include "pcst/instance.hpp"
#include "pcst/oracle.hpp"
#include "pcst/rooting.hpp"

namespace pcst {

struct SuiteEntry {
  std::string label;  // class column of the report
  ClassSpec spec;
  std::vector<std::uint64_t> seeds;
};

struct Suite {
  std::string name;
  std::vector<SuiteEntry> entries;
  bool oracle = true;  // exact gaps for instances the oracle admits
};

struct BenchRow {
  std::string name;
  std::string cls;
  int n = 0;
  int m = 0;
  real cost = 0;
  std::optional<real> bound;
  std::optional<real> gap;
  int sweeps = 0;
  double time_s = 0;
  bool converged = false;
  real solution_fraction = 0;
  std::string error;

  bool operator==(const BenchRow&) const = default;
};

struct ClassSummary {
  std::string cls;
  int rows = 0;
  int failures = 0;
  int converged = 0;
  int with_gap = 0;
  real mean_cost = 0;
  real mean_gap = 0;
  real median_gap = 0;
  double mean_time_s = 0;
  real mean_fraction = 0;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<ClassSummary> classes;

  bool any_failure() const
  {
    return std::any_of(rows.begin(), rows.end(), [](const BenchRow& r) { return !r.error.empty(); });
  }
};

// ---- suites ----------------------------------------------------------------
//
//   {"name": "small",
//    "oracle": true,
//    "classes": [{"spec": "R:n=10,nu=2,lambda=1.5", "seeds": 20},
//                {"spec": {"family": "H", "dim": 6}, "seeds": [3, 4], "label": "H6"}]}
//
// "seeds" is either a count (seeds 0..k-1) or an explicit list.

inline Suite suite_from_json(const nlohmann::json& j)
{
  Suite s;
  s.name = j.value("name", std::string("suite"));
  s.oracle = j.value("oracle", true);
  if (!j.contains("classes") || !j.at("classes").is_array())
    throw Error("suite: missing \"classes\" array");
  for (const auto& c : j.at("classes")) {
    SuiteEntry e;
    const auto& spec = c.at("spec");
    if (spec.is_string()) {
      e.spec = parse_class_spec(spec.get<std::string>());
      e.label = spec.get<std::string>();
    } else {
      e.spec = class_spec_from_json(spec);
      e.label = spec.dump();
    }
    e.label = c.value("label", e.label);
    const auto& seeds = c.at("seeds");
    if (seeds.is_number_integer()) {
      for (long k = 0; k < seeds.get<long>(); ++k)
        e.seeds.push_back(static_cast<std::uint64_t>(k));
    } else {
      e.seeds = seeds.get<std::vector<std::uint64_t>>();
    }
    if (e.seeds.empty())
      throw Error("suite: class '" + e.label + "' has no seeds");
    s.entries.push_back(std::move(e));
  }
  if (s.entries.empty())
    throw Error("suite: no classes");
  return s;
}

inline Suite parse_suite(const std::string& text)
{
  return suite_from_json(nlohmann::json::parse(text));
}

// ---- running ---------------------------------------------------------------

inline std::vector<ClassSummary> summarize(const std::vector<BenchRow>& rows)
{
  std::vector<ClassSummary> out;
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<real>> gaps;
  for (const auto& r : rows) {
    auto [it, fresh] = index.try_emplace(r.cls, out.size());
    if (fresh) {
      out.push_back({});
      out.back().cls = r.cls;
      gaps.emplace_back();
    }
    ClassSummary& s = out[it->second];
    ++s.rows;
    if (!r.error.empty()) {
      ++s.failures;
      continue;
    }
    s.converged += r.converged;
    s.mean_cost += r.cost;
    s.mean_time_s += r.time_s;
    s.mean_fraction += r.solution_fraction;
    if (r.gap)
      gaps[it->second].push_back(*r.gap);
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    ClassSummary& s = out[k];
    const int ok = s.rows - s.failures;
    if (ok > 0) {
      s.mean_cost /= ok;
      s.mean_time_s /= ok;
      s.mean_fraction /= ok;
    }
    auto& g = gaps[k];
    s.with_gap = static_cast<int>(g.size());
    if (!g.empty()) {
      for (real x : g)
        s.mean_gap += x;
      s.mean_gap /= static_cast<real>(g.size());
      std::sort(g.begin(), g.end());
      const std::size_t h = g.size() / 2;
      s.median_gap = g.size() % 2 ? g[h] : 0.5 * (g[h - 1] + g[h]);
    }
  }
  return out;
}

inline BenchRow bench_instance(const Instance& inst, const std::string& cls, const SolverConfig& cfg,
                               const PcstOptions& opt, bool oracle)
{
  BenchRow row;
  row.name = inst.name;
  row.cls = cls;
  row.n = inst.node_count;
  row.m = inst.edge_count();
  try {
    const auto t0 = std::chrono::steady_clock::now();
    PcstRun run = solve_pcst(inst, cfg, opt);
    row.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    row.cost = run.solution.cost;
    row.sweeps = run.stats.sweeps_used;
    row.converged = run.stats.converged;
    row.solution_fraction = static_cast<real>(run.solution.size()) / inst.node_count;
    const bool bounded = cfg.depth_bound > 0 && cfg.depth_bound < inst.node_count - 1;
    const int guard = bounded || !inst.symmetric ? kOracleMaxNodesBounded : kOracleMaxNodes;
    if (oracle && inst.node_count <= guard) {
      const OptResult best =
          exact_pcst(inst, std::nullopt, bounded ? std::optional<int>(cfg.depth_bound) : std::nullopt);
      row.bound = best.cost;
      if (std::abs(row.cost - best.cost) <= 1e-9 * std::max(real{1}, best.cost))
        row.gap = 0.0;  // same tree, costs summed in a different order
      else if (best.cost > 0)
        row.gap = gap_percent(row.cost, best.cost);
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

/// Generates and solves every (class, seed) of the suite in order. Failures
/// are recorded in their row and the run continues.
inline BenchResult run_bench(const Suite& suite, const SolverConfig& cfg, const PcstOptions& opt = {})
{
  if (suite.entries.empty())
    throw Error("run_bench: empty suite");
  BenchResult res;
  for (const auto& entry : suite.entries)
    for (auto seed : entry.seeds) {
      std::optional<Instance> inst;
      try {
        inst = generate(entry.spec, seed);
      } catch (const std::exception& e) {
        BenchRow row;
        row.name = family_name(entry.spec) + "-s" + std::to_string(seed);
        row.cls = entry.label;
        row.error = e.what();
        res.rows.push_back(std::move(row));
        continue;
      }
      res.rows.push_back(bench_instance(*inst, entry.label, cfg, opt, suite.oracle));
    }
  res.classes = summarize(res.rows);
  return res;
}

// ---- csv -------------------------------------------------------------------

inline const std::vector<std::string>& bench_columns()
{
  static const std::vector<std::string> cols{"name",  "class",  "n",      "m",         "cost",
                                             "bound", "gap",    "sweeps", "time_s",    "converged",
                                             "solution_fraction", "error"};
  return cols;
}

namespace detail {

inline std::string csv_field(const std::string& s)
{
  if (s.find_first_of(",\"\n\r") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"')
      out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::vector<std::vector<std::string>> csv_records(const std::string& text)
{
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> rec;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
      continue;
    }
    if (ch == '"') {
      quoted = true;
      any = true;
    } else if (ch == ',') {
      rec.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (ch == '\n') {
      if (any || !field.empty()) {
        rec.push_back(std::move(field));
        out.push_back(std::move(rec));
      }
      rec.clear();
      field.clear();
      any = false;
    } else if (ch != '\r') {
      field += ch;
      any = true;
    }
  }
  if (quoted)
    throw Error("csv: unterminated quote");
  if (any || !field.empty()) {
    rec.push_back(std::move(field));
    out.push_back(std::move(rec));
  }
  return out;
}

inline std::string opt_real(const std::optional<real>& x) { return x ? format_real(*x) : std::string(); }

}  // namespace detail

inline std::string bench_csv(const std::vector<BenchRow>& rows)
{
  std::ostringstream os;
  const auto& cols = bench_columns();
  for (std::size_t k = 0; k < cols.size(); ++k)
    os << (k ? "," : "") << cols[k];
  os << '\n';
  for (const auto& r : rows) {
    os << detail::csv_field(r.name) << ',' << detail::csv_field(r.cls) << ',' << r.n << ',' << r.m << ','
       << format_real(r.cost) << ',' << detail::opt_real(r.bound) << ',' << detail::opt_real(r.gap) << ','
       << r.sweeps << ',' << format_real(r.time_s) << ',' << (r.converged ? 1 : 0) << ','
       << format_real(r.solution_fraction) << ',' << detail::csv_field(r.error) << '\n';
  }
  return os.str();
}

inline std::vector<BenchRow> parse_bench_csv(const std::string& text)
{
  auto recs = detail::csv_records(text);
  if (recs.empty() || recs.front() != bench_columns())
    throw Error("csv: unexpected header");
  std::vector<BenchRow> rows;
  for (std::size_t k = 1; k < recs.size(); ++k) {
    const auto& f = recs[k];
    if (f.size() != bench_columns().size())
      throw Error("csv: record " + std::to_string(k) + " has " + std::to_string(f.size()) + " fields");
    auto num = [&](const std::string& x) {
      real v = 0;
      if (!parse_real(x, v))
        throw Error("csv: bad number '" + x + "' in record " + std::to_string(k));
      return v;
    };
    BenchRow r;
    r.name = f[0];
    r.cls = f[1];
    r.n = std::stoi(f[2]);
    r.m = std::stoi(f[3]);
    r.cost = num(f[4]);
    if (!f[5].empty())
      r.bound = num(f[5]);
    if (!f[6].empty())
      r.gap = num(f[6]);
    r.sweeps = std::stoi(f[7]);
    r.time_s = num(f[8]);
    r.converged = f[9] == "1";
    r.solution_fraction = num(f[10]);
    r.error = f[11];
    rows.push_back(std::move(r));
  }
  return rows;
}

inline nlohmann::json to_json(const ClassSummary& s)
{
  return {{"class", s.cls},
          {"rows", s.rows},
          {"failures", s.failures},
          {"converged", s.converged},
          {"with_gap", s.with_gap},
          {"mean_cost", s.mean_cost},
          {"mean_gap", s.mean_gap},
          {"median_gap", s.median_gap},
          {"mean_time_s", s.mean_time_s},
          {"mean_fraction", s.mean_fraction}};
}

}  // namespace pcst

#endif
