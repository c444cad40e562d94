#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stabset/esc.hpp"
#include "stabset/exact_enum.hpp"
#include "stabset/graph.hpp"
#include "stabset/heuristics.hpp"

namespace stabset::bnb {

struct Fixing {
  Vertex vertex;  // original label
  int value;      // 0 or 1
  friend bool operator==(const Fixing&, const Fixing&) = default;
};

/// Subproblem P(G, c): residual graph plus the count c of vertices fixed to 1.
struct Node {
  Graph graph;
  std::vector<Vertex> original;  // residual vertex -> original label
  int offset = 0;
  std::vector<Fixing> trail;
  double inherited_ub = 0.0;
  int depth = 0;
  std::int64_t id = 0;
};

struct Incumbent {
  int value = 0;
  std::vector<Vertex> witness;  // original labels, sorted
};

Node root_node(const Graph& g);

/// Children for residual vertex i: x_i = 1 removes N[i] and adds 1 to the
/// offset, x_i = 0 removes i. Child ids are left to the caller.
std::pair<Node, Node> branch(const Node& node, Vertex i);

/// Residual graph obtained by applying a trail to the original graph.
MappedGraph replay_trail(const Graph& original, const std::vector<Fixing>& trail);

/// argmin |x_i - 0.5|, ties to the lowest index.
Vertex select_branch_var(const Eigen::VectorXd& x);

struct Config {
  BoundMode mode = BoundMode::TH;
  int leaf_size = kDefaultLeafSize;
  std::optional<double> time_limit_s = 14400.0;
  std::uint64_t seed = 0;
  double eps_facet = kFacetEps;
  int subgraph_order = kDefaultSubgraphOrder;
  int max_cycles = 20;
  int threads = 1;
  /// Isolated residual vertices are fixed to 1 before bounding.
  bool fix_isolated = true;
  bool record_nodes = false;
  HeuristicOptions heuristics;
  sdp::SolverOptions sdp;
};

struct NodeSummary {
  std::int64_t id = 0;
  int depth = 0;
  int vertices = 0;
  int offset = 0;
  double bound = 0.0;
  int cycles = 0;
  std::string outcome;  // leaf, pruned, branched
  double seconds = 0.0;
};

struct Result {
  bool optimal = false;
  int lower_bound = 0;
  int upper_bound = 0;
  std::vector<Vertex> witness;  // original labels, sorted
  std::int64_t nodes = 0;
  std::int64_t leaves = 0;
  std::int64_t pruned = 0;
  std::int64_t bounded = 0;
  std::int64_t sdp_cycles = 0;
  double seconds = 0.0;
  bool deterministic = true;
  std::vector<NodeSummary> per_node;
};

/// Best-first branch and bound for alpha(g). Pruning uses safe bounds only:
/// a node is closed once its bound is below incumbent + 1 - kPruneTol.
Result solve(const Graph& g, const Config& config = {});

/// Run report; timing lives only in "time_s" fields.
nlohmann::json to_json(const Result& r, const Config& config, const std::string& instance);

}  // namespace stabset::bnb
