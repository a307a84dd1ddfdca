#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace boundchain {

using Node = std::uint32_t;

class GraphError : public std::runtime_error {
 public:
  GraphError(std::size_t line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct Edge {
  Node u;
  Node v;
  Node other(Node x) const { return x == u ? v : u; }
};

/// Undirected simple graph. Edges keep their input order; orientation states
/// are indexed by that order.
class Graph {
 public:
  Graph() = default;

  /// Validates and builds adjacency. `lines` gives the source line of each
  /// edge for error messages (empty when built programmatically).
  static Graph from_edges(std::size_t n, std::vector<Edge> edges,
                          const std::vector<std::size_t>& lines = {}) {
    if (n == 0) throw GraphError(0, "graph must have at least one node");
    Graph g;
    g.edges_ = std::move(edges);
    g.adjacency_.assign(n, {});
    g.incident_.assign(n, {});
    std::set<std::pair<Node, Node>> seen;
    for (std::size_t e = 0; e < g.edges_.size(); ++e) {
      const auto line = lines.empty() ? 0 : lines[e];
      const Edge& ed = g.edges_[e];
      if (ed.u >= n || ed.v >= n)
        throw GraphError(line, "node index out of range [0, " + std::to_string(n) + ")");
      if (ed.u == ed.v) throw GraphError(line, "self-loop at node " + std::to_string(ed.u));
      if (!seen.emplace(std::min(ed.u, ed.v), std::max(ed.u, ed.v)).second)
        throw GraphError(line, "duplicate edge " + std::to_string(ed.u) + " " +
                                   std::to_string(ed.v));
      g.adjacency_[ed.u].push_back(ed.v);
      g.adjacency_[ed.v].push_back(ed.u);
      g.incident_[ed.u].push_back(static_cast<std::uint32_t>(e));
      g.incident_[ed.v].push_back(static_cast<std::uint32_t>(e));
    }
    for (const auto& nb : g.adjacency_) g.max_degree_ = std::max(g.max_degree_, nb.size());
    return g;
  }

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t max_degree() const { return max_degree_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_[e]; }
  const std::vector<Node>& neighbors(Node v) const { return adjacency_[v]; }
  const std::vector<std::uint32_t>& incident_edges(Node v) const { return incident_[v]; }
  std::size_t degree(Node v) const { return adjacency_[v].size(); }

  std::size_t min_degree() const {
    std::size_t d = adjacency_.empty() ? 0 : adjacency_[0].size();
    for (const auto& nb : adjacency_) d = std::min(d, nb.size());
    return d;
  }

  bool connected() const {
    std::vector<char> seen(node_count(), 0);
    std::vector<Node> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const Node v = stack.back();
      stack.pop_back();
      for (Node w : adjacency_[v])
        if (!seen[w]) {
          seen[w] = 1;
          ++reached;
          stack.push_back(w);
        }
    }
    return reached == node_count();
  }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Node>> adjacency_;
  std::vector<std::vector<std::uint32_t>> incident_;
  std::size_t max_degree_ = 0;
};

/// Parses the edge-list format: '#' comment lines, a header "n m", then m
/// lines "u v". LF or CRLF.
inline Graph load_graph(std::string_view text) {
  std::vector<Edge> edges;
  std::vector<std::size_t> lines;
  std::size_t n = 0, m = 0;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const auto first = raw.find_first_not_of(" \t");
    if (first == std::string_view::npos) continue;
    if (raw[first] == '#') continue;

    std::istringstream in{std::string(raw)};
    long long a = 0, b = 0;
    std::string extra;
    if (!(in >> a >> b) || (in >> extra))
      throw GraphError(line_no, have_header ? "expected \"u v\"" : "malformed header, expected \"n m\"");
    if (!have_header) {
      if (a <= 0 || b < 0) throw GraphError(line_no, "malformed header, need n >= 1 and m >= 0");
      n = static_cast<std::size_t>(a);
      m = static_cast<std::size_t>(b);
      have_header = true;
      continue;
    }
    if (edges.size() == m) throw GraphError(line_no, "more than m = " + std::to_string(m) + " edge lines");
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n || static_cast<std::size_t>(b) >= n)
      throw GraphError(line_no, "node index out of range [0, " + std::to_string(n) + ")");
    edges.push_back(Edge{static_cast<Node>(a), static_cast<Node>(b)});
    lines.push_back(line_no);
  }
  if (!have_header) throw GraphError(line_no, "malformed header, expected \"n m\"");
  if (edges.size() != m)
    throw GraphError(line_no, "expected " + std::to_string(m) + " edges, found " +
                                  std::to_string(edges.size()));
  return Graph::from_edges(n, std::move(edges), lines);
}

// Small fixed families used by tests and examples.

inline Graph make_path(std::size_t n) {
  std::vector<Edge> e;
  for (Node i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return Graph::from_edges(n, e);
}

inline Graph make_cycle(std::size_t n) {
  std::vector<Edge> e;
  for (Node i = 0; i < n; ++i) e.push_back({i, static_cast<Node>((i + 1) % n)});
  return Graph::from_edges(n, e);
}

inline Graph make_complete(std::size_t n) {
  std::vector<Edge> e;
  for (Node i = 0; i < n; ++i)
    for (Node j = i + 1; j < n; ++j) e.push_back({i, j});
  return Graph::from_edges(n, e);
}

inline Graph make_star(std::size_t leaves) {
  std::vector<Edge> e;
  for (Node i = 1; i <= leaves; ++i) e.push_back({0, i});
  return Graph::from_edges(leaves + 1, e);
}

inline Graph make_grid(std::size_t rows, std::size_t cols) {
  std::vector<Edge> e;
  auto id = [cols](std::size_t r, std::size_t c) { return static_cast<Node>(r * cols + c); };
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) e.push_back({id(r, c), id(r, c + 1)});
      if (r + 1 < rows) e.push_back({id(r, c), id(r + 1, c)});
    }
  return Graph::from_edges(rows * cols, e);
}

inline Graph make_petersen() {
  std::vector<Edge> e;
  for (Node i = 0; i < 5; ++i) {
    e.push_back({i, static_cast<Node>((i + 1) % 5)});          // outer cycle
    e.push_back({i, static_cast<Node>(i + 5)});                 // spokes
    e.push_back({static_cast<Node>(i + 5), static_cast<Node>((i + 2) % 5 + 5)});  // pentagram
  }
  return Graph::from_edges(10, e);
}

}  // namespace boundchain
