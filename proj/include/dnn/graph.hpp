// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dnn/errors.hpp"

namespace dnn {

/// Simple undirected graph on vertices 0..n-1.
class Graph {
 public:
  using Edge = std::pair<int, int>;  // first < second

  Graph() = default;

  /// Edges may be given in any orientation; duplicates collapse.
  Graph(int n, std::vector<Edge> edges) : n_(n), adj_(static_cast<std::size_t>(n) * n, 0) {
    if (n < 1) throw InputError("Graph: vertex count must be positive");
    for (auto& [i, j] : edges) {
      if (i < 0 || j < 0 || i >= n || j >= n) throw InputError("Graph: vertex index out of range");
      if (i == j) throw InputError("Graph: self-loop");
      if (i > j) std::swap(i, j);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (const auto& [i, j] : edges) {
      adj_[index(i, j)] = 1;
      adj_[index(j, i)] = 1;
    }
    edges_ = std::move(edges);
  }

  int num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  bool has_edge(int i, int j) const { return adj_[index(i, j)] != 0; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::uint8_t> adj_;
};

inline Graph complement(const Graph& g) {
  const int n = g.num_vertices();
  std::vector<Graph::Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2 - g.num_edges());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!g.has_edge(i, j)) edges.emplace_back(i, j);
  return Graph(n, std::move(edges));
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline long long parse_int(std::string_view tok, std::size_t line) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "expected an integer, got '" + std::string(tok) + "'");
  }
  return v;
}

}  // namespace detail

/// DIMACS ASCII graph format: `c` comments, one `p edge <n> <m>` line, then
/// `e <i> <j>` lines with 1-based vertices.
inline Graph parse_dimacs(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  long long n = -1;
  std::vector<Graph::Edge> edges;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = detail::split_ws(line);
    if (tok.empty() || tok[0] == "c") continue;
    if (tok[0] == "p") {
      if (n >= 0) throw ParseError(lineno, "duplicate problem line");
      if (tok.size() != 4 || (tok[1] != "edge" && tok[1] != "col")) {
        throw ParseError(lineno, "expected 'p edge <vertices> <edges>'");
      }
      n = detail::parse_int(tok[2], lineno);
      const long long m = detail::parse_int(tok[3], lineno);
      if (n < 1 || n > (1 << 24)) throw ParseError(lineno, "vertex count out of range");
      if (m < 0) throw ParseError(lineno, "negative edge count");
      edges.reserve(static_cast<std::size_t>(std::min<long long>(m, 1 << 24)));
    } else if (tok[0] == "e") {
      if (n < 0) throw ParseError(lineno, "edge before problem line");
      if (tok.size() != 3) throw ParseError(lineno, "expected 'e <i> <j>'");
      const long long i = detail::parse_int(tok[1], lineno);
      const long long j = detail::parse_int(tok[2], lineno);
      if (i < 1 || i > n || j < 1 || j > n) throw ParseError(lineno, "vertex out of range");
      if (i == j) throw ParseError(lineno, "self-loop");
      edges.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1));
    } else {
      throw ParseError(lineno, "unknown line type '" + std::string(tok[0]) + "'");
    }
  }
  if (n < 0) throw ParseError(lineno, "missing problem line");
  return Graph(static_cast<int>(n), std::move(edges));
}

inline Graph parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

inline void write_dimacs(std::ostream& out, const Graph& g) {
  out << "p edge " << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const auto& [i, j] : g.edges()) out << "e " << i + 1 << ' ' << j + 1 << '\n';
}

}  // namespace dnn
