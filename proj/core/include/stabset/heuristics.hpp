#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "stabset/graph.hpp"

namespace stabset {

/// HT: vertices by decreasing x (values equal after rounding to 1e-6 keep
/// ascending index order), added greedily while the set stays stable.
std::vector<Vertex> heuristic_theta_round(const Graph& g, const Eigen::VectorXd& x);

/// HVC: repeatedly covers the vertex of maximum support among the neighbors of
/// the minimum-support vertices (support = sum of neighbor degrees in the
/// residual graph; ties by degree, then lowest index) and returns V minus the cover.
std::vector<Vertex> heuristic_vertex_cover(const Graph& g);

/// HT with the order among near-equal x values shuffled `rounds` times; best result.
std::vector<Vertex> randomized_theta_round(const Graph& g, const Eigen::VectorXd& x, int rounds, std::uint64_t seed);

/// Local search from a stable start: (1,2)-swaps (drop one vertex, add two) to
/// a local optimum, then `kicks` rounds of forcing a random vertex into the set
/// and searching again; a kicked solution replaces the current one unless smaller.
std::vector<Vertex> iterated_local_search(const Graph& g, const std::vector<Vertex>& start, int kicks, std::uint64_t seed);

/// External low-rank heuristics plug in here. `escapes` is 1 or 5; the callee
/// must return a stable set of g (0-based) and should stop by the deadline.
using HeuristicHook =
    std::function<std::vector<Vertex>(const Graph& g, int escapes, std::chrono::steady_clock::time_point deadline)>;

struct HeuristicOptions {
  HeuristicHook hook;  // empty: randomized HT followed by iterated_local_search fills the hook slots
  int shuffles = 10;
  int kicks_per_escape = 40;
  std::uint64_t seed = 0;
};

/// Runs at node 0 and every third node: HT, HVC and the hook slots (root: 5
/// escapes for 20 s; nodes below 10: 5 escapes for 7 s; then 1 escape for 1 s
/// when n < 200, otherwise 5 escapes for 7 s with probability 0.05 and 1 escape
/// for 3 s otherwise). Returns the largest set, mapped through `original`.
std::optional<std::vector<Vertex>> heuristic_schedule(int node_index, const Graph& g, const Eigen::VectorXd& x,
                                                      const std::vector<Vertex>& original,
                                                      const HeuristicOptions& options = {});

}  // namespace stabset
