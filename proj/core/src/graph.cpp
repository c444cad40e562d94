#include "stabset/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>

namespace stabset {

VertexSet::VertexSet(std::vector<Vertex> members, int host_n) : members_(std::move(members)), host_n_(host_n) {
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
    throw std::invalid_argument("VertexSet: duplicate member");
  if (!members_.empty() && (members_.front() < 0 || members_.back() >= host_n_))
    throw std::invalid_argument("VertexSet: member out of range");
}

bool VertexSet::contains(Vertex v) const { return std::binary_search(members_.begin(), members_.end(), v); }

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)), adjacency_(static_cast<std::size_t>(n)) {
  if (n < 0) throw std::invalid_argument("Graph: negative vertex count");
  for (auto& [i, j] : edges_) {
    if (i == j) throw std::invalid_argument("Graph: self-loop at vertex " + std::to_string(i));
    if (i < 0 || j < 0 || i >= n || j >= n) throw std::invalid_argument("Graph: endpoint out of range");
    if (i > j) std::swap(i, j);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    throw std::invalid_argument("Graph: duplicate edge");
  for (const auto& [i, j] : edges_) {
    adjacency_[static_cast<std::size_t>(i)].push_back(j);
    adjacency_[static_cast<std::size_t>(j)].push_back(i);
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

Graph Graph::complete(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, std::move(e));
}

Graph Graph::edgeless(int n) { return Graph(n, {}); }

Graph Graph::cycle(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  if (n > 2) e.emplace_back(0, n - 1);
  return Graph(n, std::move(e));
}

Graph Graph::path(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, std::move(e));
}

Graph Graph::petersen() {
  // outer rim 0..4, spokes i -> i+5, inner pentagram
  std::vector<Edge> e;
  for (int i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(i, i + 5);
    e.emplace_back(5 + i, 5 + (i + 2) % 5);
  }
  return Graph(10, std::move(e));
}

bool Graph::adjacent(Vertex u, Vertex v) const {
  const auto& nb = adjacency_[static_cast<std::size_t>(u)];
  return std::binary_search(nb.begin(), nb.end(), v);
}

bool Graph::is_stable(std::span<const Vertex> vs) const {
  for (std::size_t a = 0; a < vs.size(); ++a)
    for (std::size_t b = a + 1; b < vs.size(); ++b)
      if (vs[a] == vs[b] || adjacent(vs[a], vs[b])) return false;
  return true;
}

namespace {

MappedGraph keep_vertices(const Graph& g, const std::vector<char>& keep) {
  std::vector<int> relabel(static_cast<std::size_t>(g.n()), -1);
  std::vector<Vertex> original;
  for (int v = 0; v < g.n(); ++v) {
    if (!keep[static_cast<std::size_t>(v)]) continue;
    relabel[static_cast<std::size_t>(v)] = static_cast<int>(original.size());
    original.push_back(v);
  }
  std::vector<Edge> edges;
  for (const auto& [i, j] : g.edges()) {
    const int a = relabel[static_cast<std::size_t>(i)];
    const int b = relabel[static_cast<std::size_t>(j)];
    if (a >= 0 && b >= 0) edges.emplace_back(a, b);
  }
  const int k = static_cast<int>(original.size());
  return {Graph(k, std::move(edges)), std::move(original)};
}

}  // namespace

MappedGraph induced_subgraph(const Graph& g, const VertexSet& s) {
  std::vector<char> keep(static_cast<std::size_t>(g.n()), 0);
  for (Vertex v : s) {
    if (v < 0 || v >= g.n()) throw std::invalid_argument("induced_subgraph: vertex out of range");
    keep[static_cast<std::size_t>(v)] = 1;
  }
  return keep_vertices(g, keep);
}

MappedGraph delete_closed_neighborhood(const Graph& g, Vertex v) {
  std::vector<char> keep(static_cast<std::size_t>(g.n()), 1);
  keep[static_cast<std::size_t>(v)] = 0;
  for (Vertex u : g.neighbors(v)) keep[static_cast<std::size_t>(u)] = 0;
  return keep_vertices(g, keep);
}

MappedGraph delete_vertex(const Graph& g, Vertex v) {
  std::vector<char> keep(static_cast<std::size_t>(g.n()), 1);
  keep[static_cast<std::size_t>(v)] = 0;
  return keep_vertices(g, keep);
}

Graph erdos_renyi(int n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("erdos_renyi: p must lie in [0, 1]");
  std::mt19937_64 gen(seed);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      if (u < p) edges.emplace_back(i, j);
    }
  return Graph(n, std::move(edges));
}

namespace {

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

long long to_int(std::string_view tok, std::size_t line) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, "expected integer, got '" + std::string(tok) + "'");
  return v;
}

}  // namespace

Graph parse_dimacs(std::string_view text) {
  long long n = -1, m = -1;
  std::vector<Edge> edges;
  std::vector<std::vector<Vertex>> seen;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    const auto tok = tokens(line);
    if (tok.empty() || tok[0] == "c") continue;
    if (tok[0] == "p") {
      if (n >= 0) throw ParseError(lineno, "second problem line");
      if (tok.size() != 4 || (tok[1] != "edge" && tok[1] != "col"))
        throw ParseError(lineno, "malformed header, expected 'p edge n m'");
      n = to_int(tok[2], lineno);
      m = to_int(tok[3], lineno);
      if (n < 0 || m < 0) throw ParseError(lineno, "negative size in header");
      seen.assign(static_cast<std::size_t>(n), {});
      continue;
    }
    if (tok[0] == "e") {
      if (n < 0) throw ParseError(lineno, "edge before header");
      if (tok.size() != 3) throw ParseError(lineno, "malformed edge line");
      long long i = to_int(tok[1], lineno), j = to_int(tok[2], lineno);
      if (i < 1 || j < 1 || i > n || j > n) throw ParseError(lineno, "vertex index out of range");
      if (i == j) throw ParseError(lineno, "self-loop at vertex " + std::to_string(i));
      if (i > j) std::swap(i, j);
      auto& s = seen[static_cast<std::size_t>(i - 1)];
      if (std::find(s.begin(), s.end(), static_cast<Vertex>(j - 1)) != s.end())
        throw ParseError(lineno, "duplicate edge " + std::to_string(i) + " " + std::to_string(j));
      s.push_back(static_cast<Vertex>(j - 1));
      edges.emplace_back(static_cast<Vertex>(i - 1), static_cast<Vertex>(j - 1));
      continue;
    }
    throw ParseError(lineno, "unknown line type '" + std::string(tok[0]) + "'");
  }
  if (n < 0) throw ParseError(lineno, "missing 'p edge n m' header");
  if (static_cast<long long>(edges.size()) != m)
    throw ParseError(lineno, "header declares " + std::to_string(m) + " edges, found " + std::to_string(edges.size()));
  return Graph(static_cast<int>(n), std::move(edges));
}

Graph read_dimacs_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dimacs(ss.str());
}

std::string serialize_dimacs(const Graph& g, std::string_view comment) {
  std::ostringstream out;
  out << "c " << comment << '\n' << "p edge " << g.n() << ' ' << g.m() << '\n';
  for (const auto& [i, j] : g.edges()) out << "e " << i + 1 << ' ' << j + 1 << '\n';
  return out.str();
}

}  // namespace stabset
