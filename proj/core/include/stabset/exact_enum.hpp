#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "stabset/graph.hpp"

namespace stabset {

inline constexpr int kDefaultLeafSize = 23;
inline constexpr int kMaxStableSetOrder = 24;

class TooLargeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct AlphaResult {
  int alpha = 0;
  std::vector<Vertex> witness;
};

/// alpha(g) by enumerating subsets level by level from |V| downwards. The
/// first stable set (lexicographic order of sorted members) found at the
/// highest feasible level is returned as witness.
AlphaResult alpha_exact(const Graph& g, int limit = kDefaultLeafSize);

/// Characteristic vectors of all stable sets of g as bitmasks (bit i = vertex i),
/// ordered by cardinality and then lexicographically by sorted members. The
/// empty set comes first.
std::vector<std::uint64_t> stable_sets(const Graph& g);

std::vector<int> characteristic_vector(std::uint64_t mask, int n);

/// Per-vertex neighbor bitmasks; requires g.n() <= 64.
std::vector<std::uint64_t> adjacency_masks(const Graph& g);

}  // namespace stabset
