#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "stabset/graph.hpp"
#include "stabset/sdp.hpp"
#include "stabset/stab2.hpp"

namespace stabset {

enum class BoundMode { TH, CH, VF, SH };
std::string_view to_string(BoundMode m);
/// Accepts th/ch/vf/sh in either case; throws std::invalid_argument otherwise.
BoundMode parse_bound_mode(std::string_view s);

inline constexpr double kFacetEps = 5e-5;
inline constexpr double kHyperplaneThreshold = 5e-5;
inline constexpr double kDualDropThreshold = 0.01;
inline constexpr double kPruneTol = 1e-6;
inline constexpr int kDefaultSubgraphOrder = 5;
inline constexpr int kMaxShSubgraphOrder = 10;

/// max 1'x  s.t.  Y = [1 x'; x X] psd, diag(X) = x, X_ij = 0 on edges.
/// Y row/column 0 is the homogenizing index, vertex v sits at v + 1.
sdp::SdpModel theta_model(const Graph& g);

struct Hyperplane {
  Eigen::MatrixXd H;
  double h = 0.0;
};

/// X[I, I] for a square matrix indexed by vertices.
Eigen::MatrixXd submatrix(const Eigen::MatrixXd& X, const VertexSet& subset);

/// Appends <F, X_I> <= f (positions of edges of g are dropped since X is zero
/// there); returns the inequality row.
int add_facet_cut(sdp::SdpModel& model, const Graph& g, const VertexSet& subset, const Facet& facet);
/// Appends <H, X_I> <= h; returns the inequality row.
int add_hyperplane_cut(sdp::SdpModel& model, const VertexSet& subset, const Hyperplane& cut);

struct ChBlock {
  int first_lambda = 0;
  int t = 0;  // stable sets of G_I
  int b = 0;  // coupling equalities
  int first_equality = 0;  // simplex row, couplings follow
};

/// Adds the lambda block, the simplex row and the coupling rows
/// X_I = sum lambda_i S_i (one row per non-edge position of the upper triangle).
ChBlock build_ch_constraints(sdp::SdpModel& model, const Graph& g, const VertexSet& subset);

struct Projection {
  Eigen::MatrixXd P;
  double distance = 0.0;
  Eigen::VectorXd lambda;
  /// Frank-Wolfe gap lambda'Q lambda - min_i (Q lambda)_i at the returned lambda.
  double fw_gap = 0.0;
};

/// Euclidean projection of xsub onto conv{S_i}, via Wolfe's min-norm-point
/// algorithm on the Gram matrix Q_ii' = <S_i - X, S_i' - X>.
Projection project_to_stab2(const Eigen::MatrixXd& xsub, const std::vector<StableSetMatrix>& mats, double tol = 1e-12);
Projection project_to_stab2(const Eigen::MatrixXd& xsub, const Graph& g_sub, double tol = 1e-12);
/// Squared distance only; cheaper bookkeeping for the subgraph search.
double projection_distance(const Eigen::MatrixXd& xsub, const std::vector<StableSetMatrix>& mats);

/// H = (xsub - P)/|xsub - P|, h = <H, P>. If rounding leaves some S_i with
/// <H, S_i> > h, h is raised to that maximum so the cut stays valid.
/// Returns nothing when the distance is below `threshold`.
std::optional<Hyperplane> separating_hyperplane(const Eigen::MatrixXd& xsub, const Projection& proj,
                                                const std::vector<StableSetMatrix>& mats,
                                                double threshold = kHyperplaneThreshold);

struct Candidate {
  VertexSet subset;
  double distance = 0.0;
};

struct SearchParams {
  int order = kDefaultSubgraphOrder;
  /// Local-search starts and pool size are starts_per_vertex * n; the best
  /// keep_per_vertex * n above `threshold` are returned.
  int starts_per_vertex = 9;
  int keep_per_vertex = 3;
  double threshold = kHyperplaneThreshold;
  /// Swap moves tried per local-search step before giving up on improvement.
  int swaps_per_step = 12;
  int max_steps = 8;
};

/// Candidate subsets ranked by projection distance of X*_I to STAB2(G_I),
/// descending, ties by subset. X is the n x n block of Y.
std::vector<Candidate> find_violated_subgraphs(const Eigen::MatrixXd& X, const Graph& g, std::uint64_t seed,
                                               const SearchParams& params = {});

/// Stop iff current - horizon * decay * avg_decrease >= lb + 1 - prune_tol,
/// avg_decrease = (first - current) / cycles. history holds one bound per cycle.
bool forecast_stop(const std::vector<double>& history, double lb, int horizon = 5, double decay = 0.75,
                   double prune_tol = kPruneTol);

struct EscRecord {
  VertexSet subset;
  ChBlock ch;                  // CH
  std::vector<int> facets;     // VF: indices into facet_library(k)
  std::vector<int> cut_rows;   // VF/SH: inequality rows in the current model
  std::optional<Hyperplane> hyperplane;  // SH
  double last_dual = 0.0;
};

struct ModelStats {
  int psd_order = 0;
  int nonneg = 0;
  int equalities = 0;
  int inequalities = 0;
  friend bool operator==(const ModelStats&, const ModelStats&) = default;
};

/// Sizes of the relaxation for the given ESC set: CH (n+1, sum t, n+m+1+|J|+sum b, 0),
/// VF (n+1, 0, n+m+1, sum |V_I|), SH (n+1, 0, n+m+1, |J|), TH (n+1, 0, n+m+1, 0).
ModelStats model_stats(BoundMode mode, const Graph& g, const std::vector<EscRecord>& J);
ModelStats model_stats(const sdp::SdpModel& model);

struct CycleRecord {
  double bound = 0.0;      // safe upper bound of this cycle's relaxation
  double objective = 0.0;  // primal objective
  int escs = 0;
  int added = 0;
  int removed = 0;
  double seconds = 0.0;
};

struct BoundReport {
  BoundMode mode = BoundMode::TH;
  double value = std::numeric_limits<double>::infinity();  // smallest safe bound seen
  double objective = 0.0;                                   // primal objective of the last solve
  int cycles = 0;
  Eigen::VectorXd x;
  Eigen::MatrixXd X;
  std::vector<CycleRecord> history;
  ModelStats stats;
  sdp::Status status = sdp::Status::optimal;
  bool degraded = false;  // a solve did not reach optimal status
  std::vector<EscRecord> escs;
};

struct BoundParams {
  int order = kDefaultSubgraphOrder;
  double eps_facet = kFacetEps;
  double sh_threshold = kHyperplaneThreshold;
  double dual_drop = kDualDropThreshold;
  int max_cycles = 20;
  /// Incumbent value; enables pruning and the forecast stop.
  std::optional<double> lower_bound;
  std::uint64_t seed = 0;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  sdp::SolverOptions sdp;
  SearchParams search;
};

/// Lovasz theta as a one-cycle report.
BoundReport theta(const Graph& g, const sdp::SolverOptions& options = {});

/// Cutting-plane loop: start from J empty; each cycle solves, stops if the
/// bound prunes or the forecast says pruning is out of reach, drops ESCs with
/// |dual| below params.dual_drop and adds newly violated subgraphs.
BoundReport bound_with_escs(const Graph& g, BoundMode mode, const BoundParams& params = {});

/// One solve with a fixed ESC set J. VF cuts are the deduplicated facets of the
/// edgeless library violated by x_ref_I; SH cuts separate x_ref_I. CH ignores x_ref.
BoundReport bound_fixed_escs(const Graph& g, BoundMode mode, const std::vector<VertexSet>& J,
                             const Eigen::MatrixXd& x_ref, const BoundParams& params = {});

/// J_q: 3q distinct random k-subsets, of which the q whose X_I lie farthest
/// from STAB2(G_I) are kept (fewer if the graph has fewer subsets).
std::vector<VertexSet> random_esc_set(const Graph& g, const Eigen::MatrixXd& X, int q, int k, std::uint64_t seed);
/// Mean projection distance of X_I to STAB2(G_I) over J.
double mean_projection_distance(const Graph& g, const Eigen::MatrixXd& X, const std::vector<VertexSet>& J);
/// Mean number of deduplicated eps-violated facets of X_I over J.
double mean_violated_facets(const Graph& g, const Eigen::MatrixXd& X, const std::vector<VertexSet>& J, double eps);

nlohmann::json to_json(const BoundReport& r);
nlohmann::json to_json(const ModelStats& s);

}  // namespace stabset
