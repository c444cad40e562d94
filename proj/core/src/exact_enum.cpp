#include "stabset/exact_enum.hpp"

#include <bit>
#include <string>

namespace stabset {

std::vector<std::uint64_t> adjacency_masks(const Graph& g) {
  if (g.n() > 64) throw TooLargeError("adjacency_masks: more than 64 vertices");
  std::vector<std::uint64_t> adj(static_cast<std::size_t>(g.n()), 0);
  for (const auto& [i, j] : g.edges()) {
    adj[static_cast<std::size_t>(i)] |= std::uint64_t{1} << j;
    adj[static_cast<std::size_t>(j)] |= std::uint64_t{1} << i;
  }
  return adj;
}

namespace {

// Visits stable sets of exactly `target` vertices in lexicographic order.
// `visit` returns false to stop the walk; the function returns false if stopped.
template <class Visit>
bool walk_level(const std::vector<std::uint64_t>& adj, int n, int target, Visit&& visit) {
  std::vector<int> chosen;
  chosen.reserve(static_cast<std::size_t>(target));
  // allowed[d] = vertices compatible with the first d chosen vertices
  std::vector<std::uint64_t> allowed(static_cast<std::size_t>(target) + 1);
  allowed[0] = n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);

  auto rec = [&](auto&& self, int start, std::uint64_t mask) -> bool {
    const int depth = static_cast<int>(chosen.size());
    if (depth == target) return visit(mask);
    const std::uint64_t cand = allowed[static_cast<std::size_t>(depth)] &
                               (start >= 64 ? 0 : ~((std::uint64_t{1} << start) - 1));
    if (std::popcount(cand) < target - depth) return true;
    for (std::uint64_t c = cand; c != 0; c &= c - 1) {
      const int v = std::countr_zero(c);
      if (std::popcount(c) < target - depth) break;
      chosen.push_back(v);
      allowed[static_cast<std::size_t>(depth) + 1] = allowed[static_cast<std::size_t>(depth)] & ~adj[static_cast<std::size_t>(v)];
      const bool go_on = self(self, v + 1, mask | (std::uint64_t{1} << v));
      chosen.pop_back();
      if (!go_on) return false;
    }
    return true;
  };
  return rec(rec, 0, 0);
}

}  // namespace

AlphaResult alpha_exact(const Graph& g, int limit) {
  if (g.n() > limit || g.n() > 64)
    throw TooLargeError("alpha_exact: graph has " + std::to_string(g.n()) + " vertices, limit " + std::to_string(limit));
  const auto adj = adjacency_masks(g);
  for (int level = g.n(); level >= 1; --level) {
    std::uint64_t found = 0;
    bool hit = false;
    walk_level(adj, g.n(), level, [&](std::uint64_t mask) {
      found = mask;
      hit = true;
      return false;
    });
    if (hit) {
      AlphaResult r{level, {}};
      for (std::uint64_t c = found; c != 0; c &= c - 1) r.witness.push_back(std::countr_zero(c));
      return r;
    }
  }
  return {};
}

std::vector<std::uint64_t> stable_sets(const Graph& g) {
  if (g.n() > kMaxStableSetOrder)
    throw TooLargeError("stable_sets: graph has " + std::to_string(g.n()) + " vertices, limit " +
                        std::to_string(kMaxStableSetOrder));
  const auto adj = adjacency_masks(g);
  std::vector<std::uint64_t> out{0};
  for (int level = 1; level <= g.n(); ++level) {
    const std::size_t before = out.size();
    walk_level(adj, g.n(), level, [&](std::uint64_t mask) {
      out.push_back(mask);
      return true;
    });
    if (out.size() == before) break;
  }
  return out;
}

std::vector<int> characteristic_vector(std::uint64_t mask, int n) {
  std::vector<int> s(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = static_cast<int>((mask >> i) & 1U);
  return s;
}

}  // namespace stabset
