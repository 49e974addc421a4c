#pragma once

#include "error.hpp"

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <functional>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dvsched {

struct DfgNode {
  int id = 0;
  std::string op;
};

struct DfgEdge {
  int src = 0;
  int dst = 0;
};

/// Directed acyclic operator graph.
///
/// Nodes are stored sorted by id, so a node's index doubles as its rank in
/// the ascending-id tie-break used throughout the scheduler. All other
/// modules address nodes by index; ids only appear at the I/O boundary.
class Dfg {
 public:
  Dfg(std::string name, std::vector<DfgNode> nodes, const std::vector<DfgEdge>& edges)
      : m_name(std::move(name)), m_nodes(std::move(nodes)) {
    std::sort(m_nodes.begin(), m_nodes.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < m_nodes.size(); ++i) {
      if (m_nodes[i].op.empty()) {
        throw ValidationError("node " + std::to_string(m_nodes[i].id) + " has an empty op type");
      }
      if (!m_index.emplace(m_nodes[i].id, i).second) {
        throw ValidationError("duplicate node id " + std::to_string(m_nodes[i].id));
      }
    }
    m_preds.resize(m_nodes.size());
    m_succs.resize(m_nodes.size());
    for (const auto& e : edges) {
      auto src = index_of(e.src);
      auto dst = index_of(e.dst);
      if (!src || !dst) {
        throw ValidationError("edge " + std::to_string(e.src) + " -> " + std::to_string(e.dst) +
                              " references unknown node " + std::to_string(src ? e.dst : e.src));
      }
      if (*src == *dst) {
        throw ValidationError("self-loop on node " + std::to_string(e.src));
      }
      if (std::find(m_succs[*src].begin(), m_succs[*src].end(), *dst) != m_succs[*src].end()) {
        continue;
      }
      m_succs[*src].push_back(*dst);
      m_preds[*dst].push_back(*src);
      m_edges.push_back({*src, *dst});
    }
    for (auto& list : m_preds) std::sort(list.begin(), list.end());
    for (auto& list : m_succs) std::sort(list.begin(), list.end());
    std::sort(m_edges.begin(), m_edges.end());
    check_acyclic();
  }

  [[nodiscard]] auto name() const -> const std::string& { return m_name; }
  [[nodiscard]] auto size() const -> std::size_t { return m_nodes.size(); }
  [[nodiscard]] auto node(std::size_t i) const -> const DfgNode& { return m_nodes[i]; }
  [[nodiscard]] auto nodes() const -> const std::vector<DfgNode>& { return m_nodes; }
  [[nodiscard]] auto id(std::size_t i) const -> int { return m_nodes[i].id; }
  [[nodiscard]] auto op(std::size_t i) const -> const std::string& { return m_nodes[i].op; }
  [[nodiscard]] auto preds(std::size_t i) const -> const std::vector<std::size_t>& { return m_preds[i]; }
  [[nodiscard]] auto succs(std::size_t i) const -> const std::vector<std::size_t>& { return m_succs[i]; }

  /// Edges as (src index, dst index), sorted.
  [[nodiscard]] auto edges() const -> const std::vector<std::pair<std::size_t, std::size_t>>& { return m_edges; }

  [[nodiscard]] auto index_of(int id) const -> std::optional<std::size_t> {
    auto it = m_index.find(id);
    if (it == m_index.end()) return std::nullopt;
    return it->second;
  }

 private:
  void check_acyclic() const {
    std::vector<std::size_t> indeg(size());
    for (std::size_t v = 0; v < size(); ++v) indeg[v] = m_preds[v].size();
    std::vector<std::size_t> stack;
    for (std::size_t v = 0; v < size(); ++v) {
      if (indeg[v] == 0) stack.push_back(v);
    }
    std::size_t seen = 0;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      ++seen;
      for (auto w : m_succs[v]) {
        if (--indeg[w] == 0) stack.push_back(w);
      }
    }
    if (seen == size()) return;

    // Every leftover node has a leftover predecessor; walking predecessors
    // must revisit a node, which closes a cycle.
    std::size_t start = 0;
    while (indeg[start] == 0) ++start;
    std::vector<int> pos(size(), -1);
    std::vector<std::size_t> walk;
    auto v = start;
    while (pos[v] < 0) {
      pos[v] = static_cast<int>(walk.size());
      walk.push_back(v);
      for (auto p : m_preds[v]) {
        if (indeg[p] > 0) {
          v = p;
          break;
        }
      }
    }
    std::vector<std::size_t> cycle(walk.begin() + pos[v], walk.end());
    std::reverse(cycle.begin(), cycle.end());
    std::string msg = "cycle detected:";
    for (auto c : cycle) msg += " " + std::to_string(id(c));
    msg += " " + std::to_string(id(cycle.front()));
    throw ValidationError(msg);
  }

  std::string m_name;
  std::vector<DfgNode> m_nodes;
  std::unordered_map<int, std::size_t> m_index;
  std::vector<std::vector<std::size_t>> m_preds;
  std::vector<std::vector<std::size_t>> m_succs;
  std::vector<std::pair<std::size_t, std::size_t>> m_edges;
};

namespace detail {

inline auto split_ws(std::string_view line) -> std::vector<std::string_view> {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    auto j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline auto parse_int(std::string_view tok, std::size_t line) -> int {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(std::string(tok), &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || tok.empty()) {
    throw ParseError(line, "expected integer, got '" + std::string(tok) + "'");
  }
  return value;
}

// Yields (line number, statement) pairs: '#' comments stripped, ';' splits
// statements within a line, blank statements dropped.
inline auto statements(std::string_view text) -> std::vector<std::pair<std::size_t, std::string>> {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    ++lineno;
    auto line = text.substr(pos, nl - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t s = 0;
    while (s <= line.size()) {
      auto semi = line.find(';', s);
      if (semi == std::string_view::npos) semi = line.size();
      auto stmt = line.substr(s, semi - s);
      if (!split_ws(stmt).empty()) out.emplace_back(lineno, std::string(stmt));
      s = semi + 1;
    }
    pos = nl + 1;
  }
  return out;
}

}  // namespace detail

/// Parses the line-oriented DFG format:
///
///     name <identifier>
///     node <id> <optype>
///     edge <src> -> <dst>
///
/// `#` starts a comment and `;` may separate statements on one line. `name`
/// is optional but must come first when present.
inline auto parse_dfg(std::string_view text) -> Dfg {
  std::string name = "dfg";
  std::vector<DfgNode> nodes;
  std::vector<DfgEdge> edges;
  std::unordered_map<int, std::size_t> node_line;
  bool first = true;
  for (const auto& [line, stmt] : detail::statements(text)) {
    // "a->b" and "a -> b" are both accepted.
    std::string spaced;
    for (std::size_t i = 0; i < stmt.size(); ++i) {
      if (stmt.compare(i, 2, "->") == 0) {
        spaced += " -> ";
        ++i;
      } else {
        spaced += stmt[i];
      }
    }
    auto tok = detail::split_ws(spaced);
    if (tok[0] == "name") {
      if (!first) throw ParseError(line, "'name' must be the first statement");
      if (tok.size() != 2) throw ParseError(line, "expected 'name <identifier>'");
      name = std::string(tok[1]);
    } else if (tok[0] == "node") {
      if (tok.size() != 3) throw ParseError(line, "expected 'node <id> <optype>'");
      auto id = detail::parse_int(tok[1], line);
      if (auto [it, fresh] = node_line.emplace(id, line); !fresh) {
        throw ParseError(line, "duplicate node id " + std::to_string(id) + " (first declared on line " +
                                   std::to_string(it->second) + ")");
      }
      nodes.push_back({id, std::string(tok[2])});
    } else if (tok[0] == "edge") {
      if (tok.size() != 4 || tok[2] != "->") throw ParseError(line, "expected 'edge <src> -> <dst>'");
      edges.push_back({detail::parse_int(tok[1], line), detail::parse_int(tok[3], line)});
      if (edges.back().src == edges.back().dst) {
        throw ParseError(line, "self-loop on node " + std::to_string(edges.back().src));
      }
    } else {
      throw ParseError(line, "unknown statement '" + std::string(tok[0]) + "'");
    }
    first = false;
  }
  for (const auto& e : edges) {
    for (auto endpoint : {e.src, e.dst}) {
      if (!node_line.contains(endpoint)) {
        throw ValidationError("dangling edge " + std::to_string(e.src) + " -> " + std::to_string(e.dst) +
                              ": node " + std::to_string(endpoint) + " is not declared");
      }
    }
  }
  return Dfg(std::move(name), std::move(nodes), edges);
}

inline auto load_dfg_file(const std::string& path) -> Dfg {
  std::ifstream in(path);
  if (!in) throw Error("cannot open DFG file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_dfg(buf.str());
}

inline auto format_dfg(const Dfg& g) -> std::string {
  std::ostringstream out;
  out << "name " << g.name() << "\n";
  for (const auto& n : g.nodes()) out << "node " << n.id << " " << n.op << "\n";
  for (const auto& [s, d] : g.edges()) out << "edge " << g.id(s) << " -> " << g.id(d) << "\n";
  return out.str();
}

/// Kahn's algorithm with a min-heap, so ties go to the smallest id.
inline auto topological_indices(const Dfg& g) -> std::vector<std::size_t> {
  std::vector<std::size_t> indeg(g.size());
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t v = 0; v < g.size(); ++v) {
    indeg[v] = g.preds(v).size();
    if (indeg[v] == 0) ready.push(v);
  }
  std::vector<std::size_t> order;
  order.reserve(g.size());
  while (!ready.empty()) {
    auto v = ready.top();
    ready.pop();
    order.push_back(v);
    for (auto w : g.succs(v)) {
      if (--indeg[w] == 0) ready.push(w);
    }
  }
  return order;
}

inline auto topological_order(const Dfg& g) -> std::vector<int> {
  std::vector<int> ids;
  for (auto v : topological_indices(g)) ids.push_back(g.id(v));
  return ids;
}

}  // namespace dvsched
