#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stabset {

/// Vertices are 0-based inside the library. DIMACS files and JSON reports use
/// 1-based labels; the conversion happens only at those boundaries.
using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Sorted set of distinct vertices of a host graph with host_n vertices.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(std::vector<Vertex> members, int host_n);

  const std::vector<Vertex>& members() const noexcept { return members_; }
  int host_n() const noexcept { return host_n_; }
  int size() const noexcept { return static_cast<int>(members_.size()); }
  bool contains(Vertex v) const;

  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }
  Vertex operator[](int i) const { return members_[static_cast<std::size_t>(i)]; }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;
  friend auto operator<=>(const VertexSet& a, const VertexSet& b) { return a.members_ <=> b.members_; }

 private:
  std::vector<Vertex> members_;
  int host_n_ = 0;
};

/// Simple undirected graph. Immutable once constructed.
class Graph {
 public:
  Graph() = default;
  /// Throws std::invalid_argument on self-loops, duplicates or out-of-range endpoints.
  Graph(int n, std::vector<Edge> edges);

  static Graph complete(int n);
  static Graph edgeless(int n);
  static Graph cycle(int n);
  static Graph path(int n);
  static Graph petersen();

  int n() const noexcept { return n_; }
  int m() const noexcept { return static_cast<int>(edges_.size()); }
  /// Edges (i, j) with i < j in lexicographic order.
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[static_cast<std::size_t>(v)]; }
  int degree(Vertex v) const { return static_cast<int>(adjacency_[static_cast<std::size_t>(v)].size()); }
  bool adjacent(Vertex u, Vertex v) const;

  /// True if no two members of `vs` are adjacent.
  bool is_stable(std::span<const Vertex> vs) const;

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adjacency_;
};

/// A graph derived from a host graph, with `original[i]` the host label of vertex i.
struct MappedGraph {
  Graph graph;
  std::vector<Vertex> original;
};

MappedGraph induced_subgraph(const Graph& g, const VertexSet& s);
MappedGraph delete_closed_neighborhood(const Graph& g, Vertex v);
MappedGraph delete_vertex(const Graph& g, Vertex v);

/// G(n, p) with pairs (i, j), i < j, visited in lexicographic order. The
/// generator is std::mt19937_64 seeded with `seed`; each pair draws one 64-bit
/// word w and is kept iff (w >> 11) * 2^-53 < p.
Graph erdos_renyi(int n, double p, std::uint64_t seed);

Graph parse_dimacs(std::string_view text);
Graph read_dimacs_file(const std::string& path);
/// "c <comment>", "p edge n m", then "e i j" lines in lexicographic order, LF endings.
std::string serialize_dimacs(const Graph& g, std::string_view comment = "stabset");

}  // namespace stabset
