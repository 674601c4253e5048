#ifndef PCST_GENERATE_HPP
#define PCST_GENERATE_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pcst/common.hpp"
#include "pcst/instance.hpp"

namespace pcst {

// Benchmark families. Generators draw from Rng (mt19937_64) in a fixed,
// documented order so a (spec, seed) pair always produces the same instance.

/// G(n, p) with p = 2 nu / (n - 1); costs in {1, 2, 4}; prizes uniform in [0, 1).
struct RSpec {
  int n = 200;
  real nu = 8;
  real lambda = 1.5;
};

/// dim-dimensional hypercube; integer costs in [1, 10]. Prizes are integers
/// in [0, maxprize], or in [0, 4 * max edge cost] when maxprize is 0.
struct HypercubeSpec {
  int dim = 6;
  int maxprize = 0;
};

/// 640-node incidence instances.
struct I640Spec {
  enum class KRule { log2, sqrt, two_sqrt, quarter };
  enum class ERule { three_halves, twice, n_log_n, two_n_log_n, quarter_square };
  KRule k_rule = KRule::log2;
  ERule e_rule = ERule::three_halves;
};

/// Sparse random graphs with a prized subset (the C/D/E family).
struct CDESpec {
  enum class PrizedRule { five, ten, sixth, quarter, half };
  int n = 500;
  real avg_degree = 2.5;
  PrizedRule prized_count_rule = PrizedRule::five;
  int maxprize = 10;
};

using ClassSpec = std::variant<RSpec, HypercubeSpec, I640Spec, CDESpec>;

inline long round_half_up(real x) { return static_cast<long>(std::floor(x + 0.5)); }

inline int i640_terminal_count(I640Spec::KRule rule, int n = 640)
{
  switch (rule) {
  case I640Spec::KRule::log2: return static_cast<int>(round_half_up(std::log2(n)));
  case I640Spec::KRule::sqrt: return static_cast<int>(round_half_up(std::sqrt(n)));
  case I640Spec::KRule::two_sqrt: return static_cast<int>(round_half_up(2 * std::sqrt(n)));
  case I640Spec::KRule::quarter: return static_cast<int>(round_half_up(n / 4.0));
  }
  return 0;
}

inline long i640_edge_count(I640Spec::ERule rule, int n = 640)
{
  const real nn = n;
  switch (rule) {
  case I640Spec::ERule::three_halves: return round_half_up(3 * nn / 2);
  case I640Spec::ERule::twice: return 2L * n;
  case I640Spec::ERule::n_log_n: return round_half_up(nn * std::log(nn));
  case I640Spec::ERule::two_n_log_n: return round_half_up(2 * nn * std::log(nn));
  case I640Spec::ERule::quarter_square: return round_half_up(nn * (nn - 1) / 4);
  }
  return 0;
}

inline int cde_prized_count(CDESpec::PrizedRule rule, int n)
{
  switch (rule) {
  case CDESpec::PrizedRule::five: return std::min(5, n);
  case CDESpec::PrizedRule::ten: return std::min(10, n);
  case CDESpec::PrizedRule::sixth: return n / 6;
  case CDESpec::PrizedRule::quarter: return n / 4;
  case CDESpec::PrizedRule::half: return n / 2;
  }
  return 0;
}

namespace detail {

/// Random spanning tree plus uniformly drawn extra pairs until m edges exist.
inline std::vector<std::pair<node, node>> random_connected_edges(int n, long m, Rng& rng)
{
  std::vector<node> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.uniform_int(0, i)]);

  std::unordered_set<std::uint64_t> present;
  auto key = [n](node a, node b) {
    auto [x, y] = std::minmax(a, b);
    return static_cast<std::uint64_t>(x) * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(y);
  };
  std::vector<std::pair<node, node>> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int i = 1; i < n; ++i) {
    node a = perm[i];
    node b = perm[rng.uniform_int(0, i - 1)];
    present.insert(key(a, b));
    out.emplace_back(std::min(a, b), std::max(a, b));
  }
  while (static_cast<long>(out.size()) < m) {
    node a = static_cast<node>(rng.uniform_int(0, n - 1));
    node b = static_cast<node>(rng.uniform_int(0, n - 1));
    if (a == b || !present.insert(key(a, b)).second)
      continue;
    out.emplace_back(std::min(a, b), std::max(a, b));
  }
  return out;
}

inline std::vector<node> random_subset(int n, int k, Rng& rng)
{
  std::vector<node> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = 0; i < k; ++i)
    std::swap(perm[i], perm[rng.uniform_int(i, n - 1)]);
  perm.resize(static_cast<std::size_t>(k));
  std::sort(perm.begin(), perm.end());
  return perm;
}

inline Instance generate_r(const RSpec& s, std::uint64_t seed)
{
  if (s.n < 2 || !(s.nu > 0) || !(s.lambda >= 0))
    throw Error("R family needs n >= 2, nu > 0, lambda >= 0");
  Rng rng(seed);
  Instance inst = make_instance(s.n, s.lambda,
                                "R-n" + std::to_string(s.n) + "-nu" + format_real(s.nu) + "-l" +
                                    format_real(s.lambda) + "-s" + std::to_string(seed));
  const real p = std::min(1.0, 2 * s.nu / (s.n - 1));
  static constexpr real kWeights[3] = {1, 2, 4};
  for (node i = 0; i < s.n; ++i)
    for (node j = i + 1; j < s.n; ++j)
      if (rng.uniform01() < p)
        inst.add_edge(i, j, kWeights[rng.uniform_int(0, 2)]);
  for (node i = 0; i < s.n; ++i)
    inst.prizes[i] = rng.uniform01();
  return inst;
}

inline Instance generate_hypercube(const HypercubeSpec& s, std::uint64_t seed)
{
  if (s.dim < 2 || s.dim > 20 || s.maxprize < 0)
    throw Error("hypercube family needs 2 <= dim <= 20 and maxprize >= 0");
  Rng rng(seed);
  const int n = 1 << s.dim;
  Instance inst = make_instance(n, 1.0, "H-d" + std::to_string(s.dim) + "-s" + std::to_string(seed));
  real max_edge = 0;
  for (node i = 0; i < n; ++i)
    for (int b = 0; b < s.dim; ++b) {
      node j = i ^ (1 << b);
      if (i < j) {
        real c = static_cast<real>(rng.uniform_int(1, 10));
        max_edge = std::max(max_edge, c);
        inst.add_edge(i, j, c);
      }
    }
  const auto top = s.maxprize > 0 ? static_cast<std::int64_t>(s.maxprize)
                                  : static_cast<std::int64_t>(4 * max_edge);
  for (node i = 0; i < n; ++i)
    inst.prizes[i] = static_cast<real>(rng.uniform_int(0, top));
  return inst;
}

inline Instance generate_i640(const I640Spec& s, std::uint64_t seed)
{
  constexpr int n = 640;
  Rng rng(seed);
  const int k = i640_terminal_count(s.k_rule, n);
  const long m = i640_edge_count(s.e_rule, n);
  Instance inst = make_instance(n, 1.0,
                                "i640-k" + std::to_string(k) + "-m" + std::to_string(m) + "-s" +
                                    std::to_string(seed));
  auto prized = random_subset(n, k, rng);
  std::vector<char> in_k(n, 0);
  for (node v : prized)
    in_k[v] = 1;
  auto pairs = random_connected_edges(n, m, rng);
  real max_edge = 0;
  for (auto [u, v] : pairs) {
    const int touching = in_k[u] + in_k[v];
    const real mean = 100.0 * (1 + touching);
    const real c = std::min(std::max(1.0, static_cast<real>(round_half_up(rng.normal(mean, 5.0)))), 500.0);
    max_edge = std::max(max_edge, c);
    inst.add_edge(u, v, c);
  }
  for (node v : prized)
    inst.prizes[v] = static_cast<real>(rng.uniform_int(0, static_cast<std::int64_t>(4 * max_edge)));
  return inst;
}

inline Instance generate_cde(const CDESpec& s, std::uint64_t seed)
{
  const long m = round_half_up(s.n * s.avg_degree / 2);
  if (s.n < 2 || m < s.n - 1 || m > static_cast<long>(s.n) * (s.n - 1) / 2 || s.maxprize < 1)
    throw Error("CDE family needs n >= 2, a connected-feasible edge count and maxprize >= 1");
  Rng rng(seed);
  Instance inst = make_instance(s.n, 1.0,
                                "CDE-n" + std::to_string(s.n) + "-deg" + format_real(s.avg_degree) +
                                    "-s" + std::to_string(seed));
  for (auto [u, v] : random_connected_edges(s.n, m, rng))
    inst.add_edge(u, v, static_cast<real>(rng.uniform_int(1, 10)));
  for (node v : random_subset(s.n, cde_prized_count(s.prized_count_rule, s.n), rng))
    inst.prizes[v] = static_cast<real>(rng.uniform_int(1, s.maxprize));
  return inst;
}

}  // namespace detail

/// Draws an instance of the given family. Pure in (spec, seed).
inline Instance generate(const ClassSpec& spec, std::uint64_t seed)
{
  return std::visit(
      [seed](const auto& s) -> Instance {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RSpec>)
          return detail::generate_r(s, seed);
        else if constexpr (std::is_same_v<T, HypercubeSpec>)
          return detail::generate_hypercube(s, seed);
        else if constexpr (std::is_same_v<T, I640Spec>)
          return detail::generate_i640(s, seed);
        else
          return detail::generate_cde(s, seed);
      },
      spec);
}

inline std::string family_name(const ClassSpec& spec)
{
  static constexpr const char* kNames[] = {"R", "H", "i640", "CDE"};
  return kNames[spec.index()];
}

// ---- textual class specs ---------------------------------------------------
//
//   R:n=200,nu=8,lambda=1.5
//   H:dim=8,maxprize=0
//   i640:k=sqrt,e=2n            k in {log2,sqrt,2sqrt,n/4}
//                               e in {3n/2,2n,nlogn,2nlogn,n(n-1)/4}
//   CDE:n=500,deg=2.5,prized=n/6,maxprize=10
//                               prized in {5,10,n/6,n/4,n/2}
//
// The json form uses the same keys plus "family".

namespace detail {

inline I640Spec::KRule k_rule_from(const std::string& s)
{
  if (s == "log2") return I640Spec::KRule::log2;
  if (s == "sqrt") return I640Spec::KRule::sqrt;
  if (s == "2sqrt") return I640Spec::KRule::two_sqrt;
  if (s == "n/4") return I640Spec::KRule::quarter;
  throw Error("unknown i640 k rule '" + s + "'");
}

inline I640Spec::ERule e_rule_from(const std::string& s)
{
  if (s == "3n/2") return I640Spec::ERule::three_halves;
  if (s == "2n") return I640Spec::ERule::twice;
  if (s == "nlogn") return I640Spec::ERule::n_log_n;
  if (s == "2nlogn") return I640Spec::ERule::two_n_log_n;
  if (s == "n(n-1)/4") return I640Spec::ERule::quarter_square;
  throw Error("unknown i640 edge rule '" + s + "'");
}

inline CDESpec::PrizedRule prized_rule_from(const std::string& s)
{
  if (s == "5") return CDESpec::PrizedRule::five;
  if (s == "10") return CDESpec::PrizedRule::ten;
  if (s == "n/6") return CDESpec::PrizedRule::sixth;
  if (s == "n/4") return CDESpec::PrizedRule::quarter;
  if (s == "n/2") return CDESpec::PrizedRule::half;
  throw Error("unknown prized-count rule '" + s + "'");
}

inline std::string to_string(I640Spec::KRule r)
{
  static constexpr const char* k[] = {"log2", "sqrt", "2sqrt", "n/4"};
  return k[static_cast<int>(r)];
}

inline std::string to_string(I640Spec::ERule r)
{
  static constexpr const char* k[] = {"3n/2", "2n", "nlogn", "2nlogn", "n(n-1)/4"};
  return k[static_cast<int>(r)];
}

inline std::string to_string(CDESpec::PrizedRule r)
{
  static constexpr const char* k[] = {"5", "10", "n/6", "n/4", "n/2"};
  return k[static_cast<int>(r)];
}

inline real num(const nlohmann::json& j, const char* key, real fallback)
{
  if (!j.contains(key))
    return fallback;
  const auto& v = j.at(key);
  if (v.is_number())
    return v.get<real>();
  real x;
  if (v.is_string() && parse_real(v.get<std::string>(), x))
    return x;
  throw Error(std::string("class spec field '") + key + "' is not a number");
}

inline std::string str(const nlohmann::json& j, const char* key, const std::string& fallback)
{
  if (!j.contains(key))
    return fallback;
  const auto& v = j.at(key);
  return v.is_string() ? v.get<std::string>() : v.dump();
}

}  // namespace detail

inline ClassSpec class_spec_from_json(const nlohmann::json& j)
{
  using namespace detail;
  const std::string fam = j.at("family").get<std::string>();
  if (fam == "R")
    return RSpec{static_cast<int>(num(j, "n", 200)), num(j, "nu", 8), num(j, "lambda", 1.5)};
  if (fam == "H")
    return HypercubeSpec{static_cast<int>(num(j, "dim", 6)), static_cast<int>(num(j, "maxprize", 0))};
  if (fam == "i640")
    return I640Spec{k_rule_from(str(j, "k", "log2")), e_rule_from(str(j, "e", "3n/2"))};
  if (fam == "CDE")
    return CDESpec{static_cast<int>(num(j, "n", 500)), num(j, "deg", 2.5),
                   prized_rule_from(str(j, "prized", "5")), static_cast<int>(num(j, "maxprize", 10))};
  throw Error("unknown instance family '" + fam + "'");
}

inline nlohmann::json class_spec_to_json(const ClassSpec& spec)
{
  return std::visit(
      [](const auto& s) -> nlohmann::json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RSpec>)
          return {{"family", "R"}, {"n", s.n}, {"nu", s.nu}, {"lambda", s.lambda}};
        else if constexpr (std::is_same_v<T, HypercubeSpec>)
          return {{"family", "H"}, {"dim", s.dim}, {"maxprize", s.maxprize}};
        else if constexpr (std::is_same_v<T, I640Spec>)
          return {{"family", "i640"}, {"k", detail::to_string(s.k_rule)}, {"e", detail::to_string(s.e_rule)}};
        else
          return {{"family", "CDE"}, {"n", s.n}, {"deg", s.avg_degree},
                  {"prized", detail::to_string(s.prized_count_rule)}, {"maxprize", s.maxprize}};
      },
      spec);
}

/// Parses "FAMILY:key=value,..." or a json object.
inline ClassSpec parse_class_spec(const std::string& text)
{
  if (!text.empty() && text.front() == '{')
    return class_spec_from_json(nlohmann::json::parse(text));
  nlohmann::json j;
  auto colon = text.find(':');
  j["family"] = text.substr(0, colon);
  if (colon != std::string::npos) {
    std::string rest = text.substr(colon + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
      auto comma = rest.find(',', pos);
      if (comma == std::string::npos)
        comma = rest.size();
      std::string kv = rest.substr(pos, comma - pos);
      auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw Error("class spec entry '" + kv + "' lacks '='");
      j[kv.substr(0, eq)] = kv.substr(eq + 1);
      pos = comma + 1;
    }
  }
  return class_spec_from_json(j);
}

}  // namespace pcst

#endif
