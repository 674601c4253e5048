#ifndef PCST_IO_HPP
#define PCST_IO_HPP

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pcst/common.hpp"
#include "pcst/instance.hpp"

namespace pcst {

enum class Format { stp, json };

struct ParseError : Error {
  int line = 0;
  ParseError(int line_no, const std::string& what)
      : Error(line_no > 0 ? what + " at line " + std::to_string(line_no) : what), line(line_no) {}
};

namespace detail {

inline std::vector<std::string> split_ws(std::string_view s)
{
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
      ++i;
    std::size_t j = i;
    if (j < s.size() && s[j] == '"') {
      // quoted token, kept without the quotes
      std::size_t k = s.find('"', j + 1);
      if (k == std::string_view::npos)
        k = s.size();
      out.emplace_back(s.substr(j + 1, k - j - 1));
      i = k + 1;
      continue;
    }
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])))
      ++j;
    if (j > i)
      out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string lower(std::string s)
{
  for (auto& c : s)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline std::string quote_name(const std::string& s)
{
  std::string q;
  for (char c : s)
    if (c != '"' && c != '\n')
      q += c;
  return "\"" + q + "\"";
}

inline Instance parse_stp(std::string_view text, std::vector<std::string>* warnings)
{
  Instance inst;
  inst.lambda = 1.0;
  int declared_nodes = -1;
  int declared_edges = -1;
  std::vector<std::pair<node, node>> sym;             // E lines, in order
  std::vector<std::tuple<node, node, real>> arcs;     // A lines
  std::vector<real> sym_cost;
  std::vector<std::pair<node, real>> prizes;
  std::string section;
  bool in_section = false;
  bool saw_graph = false;

  auto warn = [&](const std::string& w) {
    if (warnings)
      warnings->push_back(w);
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos)
      nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r')
      raw.remove_suffix(1);
    auto tok = split_ws(raw);
    if (tok.empty() || tok[0][0] == '#')
      continue;
    const std::string key = lower(tok[0]);

    auto need = [&](std::size_t k) {
      if (tok.size() != k)
        throw ParseError(line_no, "syntax error: expected " + std::to_string(k - 1) +
                                      " fields after '" + tok[0] + "'");
    };
    auto to_node = [&](const std::string& s) {
      real v;
      if (!parse_real(s, v) || v != std::floor(v))
        throw ParseError(line_no, "syntax error: bad node index '" + s + "'");
      if (declared_nodes >= 0 && (v < 1 || v > declared_nodes))
        throw ParseError(line_no, "node index out of range");
      if (v < 1)
        throw ParseError(line_no, "node index out of range");
      return static_cast<node>(v) - 1;
    };
    auto to_real = [&](const std::string& s, const char* what) {
      real v;
      if (!parse_real(s, v))
        throw ParseError(line_no, std::string("syntax error: bad ") + what + " '" + s + "'");
      if (!std::isfinite(v))
        throw ParseError(line_no, std::string("non-finite ") + what);
      if (v < 0)
        throw ParseError(line_no, std::string("negative ") + what);
      return v;
    };

    if (key == "eof")
      break;
    if (!in_section) {
      if (key == "section") {
        if (tok.size() < 2)
          throw ParseError(line_no, "syntax error: SECTION without a name");
        section = lower(tok[1]);
        in_section = true;
        if (section != "graph" && section != "nodeprizes" && section != "terminals" &&
            section != "comment" && section != "parameters")
          warn("ignored unknown section '" + tok[1] + "' at line " + std::to_string(line_no));
        if (section == "graph")
          saw_graph = true;
      } else if (line_no == 1 && lower(std::string(raw)).find("stp file") != std::string::npos) {
        // magic header line
      } else {
        throw ParseError(line_no, "syntax error: unexpected '" + tok[0] + "' outside a section");
      }
      continue;
    }
    if (key == "end") {
      in_section = false;
      continue;
    }

    if (section == "graph") {
      if (key == "nodes") {
        need(2);
        declared_nodes = static_cast<int>(to_real(tok[1], "node count"));
      } else if (key == "edges" || key == "arcs") {
        need(2);
        declared_edges = static_cast<int>(to_real(tok[1], "edge count"));
      } else if (key == "e") {
        need(4);
        node u = to_node(tok[1]);
        node v = to_node(tok[2]);
        sym.emplace_back(u, v);
        sym_cost.push_back(to_real(tok[3], "cost"));
      } else if (key == "a") {
        need(4);
        node u = to_node(tok[1]);
        node v = to_node(tok[2]);
        arcs.emplace_back(u, v, to_real(tok[3], "cost"));
      } else {
        throw ParseError(line_no, "syntax error: unknown graph entry '" + tok[0] + "'");
      }
    } else if (section == "nodeprizes" || section == "terminals") {
      if (key == "tp") {
        need(3);
        prizes.emplace_back(to_node(tok[1]), to_real(tok[2], "prize"));
      } else if (key == "t") {
        throw ParseError(line_no, "terminal without prize");
      } else if (key == "terminals" || key == "nodeprizes") {
        need(2);
      } else {
        throw ParseError(line_no, "syntax error: unknown prize entry '" + tok[0] + "'");
      }
    } else if (section == "comment") {
      if (key == "name" && tok.size() >= 2)
        inst.name = tok[1];
    } else if (section == "parameters") {
      if (key == "lambda") {
        need(2);
        inst.lambda = to_real(tok[1], "lambda");
      } else {
        warn("ignored parameter '" + tok[0] + "' at line " + std::to_string(line_no));
      }
    }
  }

  if (!saw_graph || declared_nodes < 0)
    throw ParseError(0, "missing SECTION Graph with a Nodes line");
  inst.node_count = declared_nodes;
  inst.prizes.assign(static_cast<std::size_t>(declared_nodes), 0.0);
  for (auto [v, b] : prizes) {
    if (v >= declared_nodes)
      throw ParseError(0, "node index out of range in prize for node " + std::to_string(v + 1));
    inst.prizes[v] = b;
  }
  for (std::size_t k = 0; k < sym.size(); ++k)
    inst.add_edge(sym[k].first, sym[k].second, sym_cost[k]);

  // arcs pair up into asymmetric edges: "A u v c" is the cost of u pointing to v
  std::map<std::pair<node, node>, real> arc_cost;
  std::vector<std::pair<node, node>> arc_order;
  for (auto [u, v, c] : arcs) {
    if (!arc_cost.emplace(std::make_pair(u, v), c).second)
      throw ParseError(0, "duplicate arc " + std::to_string(u + 1) + "-" + std::to_string(v + 1));
    if (!arc_cost.count({v, u}))
      arc_order.emplace_back(u, v);
  }
  for (auto [u, v] : arc_order) {
    auto it = arc_cost.find({v, u});
    if (it == arc_cost.end())
      throw ParseError(0, "arc " + std::to_string(u + 1) + "-" + std::to_string(v + 1) +
                              " has no reverse arc");
    inst.add_edge(u, v, arc_cost.at({u, v}), it->second);
  }
  if (!arcs.empty())
    inst.symmetric = false;
  if (declared_edges >= 0 && declared_edges != inst.edge_count() &&
      declared_edges != static_cast<int>(sym.size() + arcs.size()))
    warn("declared edge count " + std::to_string(declared_edges) + " differs from " +
         std::to_string(inst.edge_count()) + " edges read");

  auto v = validate(inst);
  if (!v.empty())
    throw ParseError(0, v.front());
  return inst;
}

inline std::string write_stp(const Instance& inst)
{
  std::ostringstream os;
  os << "33D32945 STP File, STP Format Version 1.0\n\n";
  os << "SECTION Comment\n";
  os << "Name " << quote_name(inst.name) << "\n";
  os << "END\n\n";
  os << "SECTION Parameters\n";
  os << "Lambda " << format_real(inst.lambda) << "\n";
  os << "END\n\n";
  os << "SECTION Graph\n";
  os << "Nodes " << inst.node_count << "\n";
  os << "Edges " << inst.edge_count() << "\n";
  for (const auto& e : inst.edges) {
    if (inst.symmetric) {
      os << "E " << e.u + 1 << " " << e.v + 1 << " " << format_real(e.cost_uv) << "\n";
    } else {
      os << "A " << e.u + 1 << " " << e.v + 1 << " " << format_real(e.cost_uv) << "\n";
      os << "A " << e.v + 1 << " " << e.u + 1 << " " << format_real(e.cost_vu) << "\n";
    }
  }
  os << "END\n\n";
  os << "SECTION NodePrizes\n";
  for (int i = 0; i < inst.node_count; ++i)
    if (inst.prizes[i] != 0.0)
      os << "TP " << i + 1 << " " << format_real(inst.prizes[i]) << "\n";
  os << "END\n\nEOF\n";
  return os.str();
}

}  // namespace detail

inline nlohmann::json instance_to_json(const Instance& inst)
{
  nlohmann::json j;
  j["name"] = inst.name;
  j["nodes"] = inst.node_count;
  j["lambda"] = inst.lambda;
  j["symmetric"] = inst.symmetric;
  j["prizes"] = inst.prizes;
  auto edges = nlohmann::json::array();
  for (const auto& e : inst.edges) {
    if (inst.symmetric)
      edges.push_back({e.u, e.v, e.cost_uv});
    else
      edges.push_back({e.u, e.v, e.cost_uv, e.cost_vu});
  }
  j["edges"] = std::move(edges);
  return j;
}

inline Instance instance_from_json(const nlohmann::json& j)
{
  try {
    Instance inst;
    inst.name = j.value("name", std::string{});
    inst.node_count = j.at("nodes").get<int>();
    inst.lambda = j.value("lambda", 1.0);
    inst.prizes = j.at("prizes").get<std::vector<real>>();
    for (const auto& e : j.at("edges")) {
      if (e.size() == 3)
        inst.add_edge(e[0].get<node>(), e[1].get<node>(), e[2].get<real>());
      else if (e.size() == 4)
        inst.add_edge(e[0].get<node>(), e[1].get<node>(), e[2].get<real>(), e[3].get<real>());
      else
        throw Error("edge entries must have 3 or 4 fields");
    }
    if (j.contains("symmetric"))
      inst.symmetric = j["symmetric"].get<bool>();
    auto v = validate(inst);
    if (!v.empty())
      throw Error(v.front());
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("json: ") + e.what());
  }
}

/// Reads an instance from .stp or .json text. Unknown stp sections are
/// skipped and reported through `warnings` when given.
inline Instance parse_instance(std::string_view text, Format format,
                               std::vector<std::string>* warnings = nullptr)
{
  if (format == Format::stp)
    return detail::parse_stp(text, warnings);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, std::string("json syntax error: ") + e.what());
  }
  return instance_from_json(j);
}

inline std::string write_instance(const Instance& inst, Format format)
{
  if (format == Format::stp)
    return detail::write_stp(inst);
  return instance_to_json(inst).dump(1) + "\n";
}

inline Format format_from_path(std::string_view path)
{
  auto dot = path.rfind('.');
  if (dot != std::string_view::npos && detail::lower(std::string(path.substr(dot))) == ".json")
    return Format::json;
  return Format::stp;
}

}  // namespace pcst

#endif
