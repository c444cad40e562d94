#include "stabset/esc.hpp"

#include "stabset/exact_enum.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace stabset {

std::string_view to_string(BoundMode m) {
  switch (m) {
    case BoundMode::TH: return "th";
    case BoundMode::CH: return "ch";
    case BoundMode::VF: return "vf";
    case BoundMode::SH: return "sh";
  }
  return "?";
}

BoundMode parse_bound_mode(std::string_view s) {
  std::string t(s);
  for (auto& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "th") return BoundMode::TH;
  if (t == "ch") return BoundMode::CH;
  if (t == "vf") return BoundMode::VF;
  if (t == "sh") return BoundMode::SH;
  throw std::invalid_argument("unknown bound mode '" + std::string(s) + "' (expected th, ch, vf or sh)");
}

sdp::SdpModel theta_model(const Graph& g) {
  const int n = g.n();
  sdp::SdpModel m;
  m.block_order = n + 1;
  m.trace_bound = n + 1;
  for (int i = 1; i <= n; ++i) m.objective.push_back({0, i, 0.5});
  m.equalities.push_back({{{0, 0, 1.0}}, {}, 1.0});
  for (int i = 1; i <= n; ++i) m.equalities.push_back({{{i, i, 1.0}, {0, i, -0.5}}, {}, 0.0});
  for (const auto& [i, j] : g.edges()) m.equalities.push_back({{{i + 1, j + 1, 0.5}}, {}, 0.0});
  return m;
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& X, const VertexSet& subset) {
  const int k = subset.size();
  Eigen::MatrixXd out(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) out(a, b) = X(subset[a], subset[b]);
  return out;
}

int add_facet_cut(sdp::SdpModel& model, const Graph& g, const VertexSet& subset, const Facet& facet) {
  sdp::LinearConstraint c;
  int t = 0;
  for (int a = 0; a < facet.k; ++a)
    for (int b = a; b < facet.k; ++b, ++t) {
      const auto coef = facet.coeffs[static_cast<std::size_t>(t)];
      if (coef == 0) continue;
      const int u = subset[a], v = subset[b];
      if (a != b && g.adjacent(u, v)) continue;
      c.block.push_back({u + 1, v + 1, a == b ? static_cast<double>(coef) : 0.5 * static_cast<double>(coef)});
    }
  c.rhs = static_cast<double>(facet.rhs);
  model.inequalities.push_back(std::move(c));
  return static_cast<int>(model.inequalities.size()) - 1;
}

int add_hyperplane_cut(sdp::SdpModel& model, const VertexSet& subset, const Hyperplane& cut) {
  sdp::LinearConstraint c;
  for (int a = 0; a < subset.size(); ++a)
    for (int b = a; b < subset.size(); ++b)
      if (cut.H(a, b) != 0.0) c.block.push_back({subset[a] + 1, subset[b] + 1, cut.H(a, b)});
  c.rhs = cut.h;
  model.inequalities.push_back(std::move(c));
  return static_cast<int>(model.inequalities.size()) - 1;
}

ChBlock build_ch_constraints(sdp::SdpModel& model, const Graph& g, const VertexSet& subset) {
  const auto sub = induced_subgraph(g, subset);
  const auto sets = stable_sets(sub.graph);
  const int k = subset.size();
  ChBlock blk;
  blk.t = static_cast<int>(sets.size());
  blk.first_lambda = model.num_nonneg();
  for (int i = 0; i < blk.t; ++i) model.add_nonneg(1.0);
  blk.first_equality = static_cast<int>(model.equalities.size());
  sdp::LinearConstraint simplex;
  for (int i = 0; i < blk.t; ++i) simplex.nonneg.push_back({blk.first_lambda + i, 1.0});
  simplex.rhs = 1.0;
  model.equalities.push_back(std::move(simplex));
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) {
      if (a != b && sub.graph.adjacent(a, b)) continue;
      sdp::LinearConstraint c;
      c.block.push_back({subset[a] + 1, subset[b] + 1, a == b ? 1.0 : 0.5});
      for (int i = 0; i < blk.t; ++i) {
        const auto s = sets[static_cast<std::size_t>(i)];
        if ((s >> a) & (s >> b) & 1U) c.nonneg.push_back({blk.first_lambda + i, -1.0});
      }
      model.equalities.push_back(std::move(c));
      ++blk.b;
    }
  return blk;
}

namespace {

// Wolfe's min-norm point in conv{p_i} given only the Gram matrix Q_ij = <p_i, p_j>.
Eigen::VectorXd min_norm_point(const Eigen::MatrixXd& Q, double tol) {
  const int t = static_cast<int>(Q.rows());
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(t);
  int j0 = 0;
  Q.diagonal().minCoeff(&j0);
  lambda[j0] = 1.0;
  std::vector<int> corral{j0};
  const double scale = std::max(1.0, Q.diagonal().maxCoeff());

  for (int outer = 0; outer < 50 * t + 100; ++outer) {
    const Eigen::VectorXd w = Q * lambda;
    const double xx = lambda.dot(w);
    int j = 0;
    w.minCoeff(&j);
    if (xx - w[j] <= tol * scale) break;
    if (std::find(corral.begin(), corral.end(), j) != corral.end()) break;
    corral.push_back(j);

    for (int inner = 0; inner < 4 * t + 10; ++inner) {
      const int c = static_cast<int>(corral.size());
      Eigen::MatrixXd K(c + 1, c + 1);
      for (int a = 0; a < c; ++a)
        for (int b = 0; b < c; ++b) K(a, b) = Q(corral[a], corral[b]);
      K.row(c).setOnes();
      K.col(c).setOnes();
      K(c, c) = 0.0;
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(c + 1);
      rhs[c] = 1.0;
      const Eigen::VectorXd mu = K.completeOrthogonalDecomposition().solve(rhs).head(c);
      if (mu.minCoeff() > 1e-14) {
        for (int a = 0; a < c; ++a) lambda[corral[a]] = mu[a];
        break;
      }
      double theta = 1.0;
      for (int a = 0; a < c; ++a) {
        const double la = lambda[corral[a]];
        if (mu[a] <= 1e-14 && la - mu[a] > 0.0) theta = std::min(theta, la / (la - mu[a]));
      }
      for (int a = 0; a < c; ++a) lambda[corral[a]] += theta * (mu[a] - lambda[corral[a]]);
      std::vector<int> keep;
      for (const int i : corral) {
        if (lambda[i] > 1e-14)
          keep.push_back(i);
        else
          lambda[i] = 0.0;
      }
      corral = std::move(keep);
      if (corral.empty()) {
        lambda[j] = 1.0;
        corral.push_back(j);
      }
    }
    lambda = lambda.cwiseMax(0.0);
    lambda /= lambda.sum();
  }
  return lambda;
}

// Gram matrix of {S_i - X} from the stable set masks.
Eigen::MatrixXd gram(const Eigen::MatrixXd& xsub, const std::vector<std::uint64_t>& masks) {
  const int t = static_cast<int>(masks.size());
  const int k = static_cast<int>(xsub.rows());
  Eigen::VectorXd sx(t);
  for (int i = 0; i < t; ++i) {
    double s = 0.0;
    const auto m = masks[static_cast<std::size_t>(i)];
    for (int a = 0; a < k; ++a)
      if ((m >> a) & 1U)
        for (int b = 0; b < k; ++b)
          if ((m >> b) & 1U) s += xsub(a, b);
    sx[i] = s;
  }
  const double xx = xsub.squaredNorm();
  Eigen::MatrixXd Q(t, t);
  for (int i = 0; i < t; ++i)
    for (int j = i; j < t; ++j) {
      const double c = std::popcount(masks[static_cast<std::size_t>(i)] & masks[static_cast<std::size_t>(j)]);
      Q(i, j) = Q(j, i) = c * c - sx[i] - sx[j] + xx;
    }
  return Q;
}

std::vector<std::uint64_t> masks_of(const std::vector<StableSetMatrix>& mats) {
  std::vector<std::uint64_t> m;
  m.reserve(mats.size());
  for (const auto& s : mats) m.push_back(s.source);
  return m;
}

}  // namespace

Projection project_to_stab2(const Eigen::MatrixXd& xsub, const std::vector<StableSetMatrix>& mats, double tol) {
  const Eigen::MatrixXd Q = gram(xsub, masks_of(mats));
  Projection p;
  p.lambda = min_norm_point(Q, tol);
  p.P = Eigen::MatrixXd::Zero(xsub.rows(), xsub.cols());
  for (std::size_t i = 0; i < mats.size(); ++i)
    if (p.lambda[static_cast<Eigen::Index>(i)] != 0.0) p.P += p.lambda[static_cast<Eigen::Index>(i)] * mats[i].entries;
  p.distance = (xsub - p.P).norm();
  const Eigen::VectorXd w = Q * p.lambda;
  p.fw_gap = std::max(0.0, p.lambda.dot(w) - w.minCoeff());
  return p;
}

Projection project_to_stab2(const Eigen::MatrixXd& xsub, const Graph& g_sub, double tol) {
  return project_to_stab2(xsub, stable_set_matrices(g_sub), tol);
}

double projection_distance(const Eigen::MatrixXd& xsub, const std::vector<StableSetMatrix>& mats) {
  const Eigen::MatrixXd Q = gram(xsub, masks_of(mats));
  const Eigen::VectorXd l = min_norm_point(Q, 1e-12);
  return std::sqrt(std::max(0.0, l.dot(Q * l)));
}

std::optional<Hyperplane> separating_hyperplane(const Eigen::MatrixXd& xsub, const Projection& proj,
                                                const std::vector<StableSetMatrix>& mats, double threshold) {
  const Eigen::MatrixXd diff = xsub - proj.P;
  const double d = diff.norm();
  if (!(d >= threshold) || d == 0.0) return std::nullopt;
  Hyperplane cut;
  cut.H = diff / d;
  cut.h = (cut.H.cwiseProduct(proj.P)).sum();
  for (const auto& s : mats) cut.h = std::max(cut.h, (cut.H.cwiseProduct(s.entries)).sum());
  return cut;
}

namespace {

// Stable set masks of G_I keyed by the induced edge pattern.
class StableSetCache {
 public:
  explicit StableSetCache(int k) : k_(k) {}

  const std::vector<std::uint64_t>& get(const Graph& g, const std::vector<int>& members) {
    std::uint64_t key = 0;
    int bit = 0;
    for (int a = 0; a < k_; ++a)
      for (int b = a + 1; b < k_; ++b, ++bit)
        if (g.adjacent(members[static_cast<std::size_t>(a)], members[static_cast<std::size_t>(b)])) key |= std::uint64_t{1} << bit;
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<Edge> edges;
    bit = 0;
    for (int a = 0; a < k_; ++a)
      for (int b = a + 1; b < k_; ++b, ++bit)
        if ((key >> bit) & 1U) edges.emplace_back(a, b);
    return cache_.emplace(key, stable_sets(Graph(k_, std::move(edges)))).first->second;
  }

 private:
  int k_;
  std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> cache_;
};

}  // namespace

std::vector<Candidate> find_violated_subgraphs(const Eigen::MatrixXd& X, const Graph& g, std::uint64_t seed,
                                               const SearchParams& params) {
  const int n = g.n();
  const int k = std::min(params.order, n);
  if (k < 2 || k > kMaxStableSetOrder) return {};
  std::mt19937_64 rng(seed);
  StableSetCache cache(k);
  std::map<std::vector<int>, double> pool;

  auto distance = [&](std::vector<int> members) {
    std::sort(members.begin(), members.end());
    if (auto it = pool.find(members); it != pool.end()) return it->second;
    Eigen::MatrixXd xs(k, k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) xs(a, b) = X(members[static_cast<std::size_t>(a)], members[static_cast<std::size_t>(b)]);
    const auto& masks = cache.get(g, members);
    const Eigen::MatrixXd Q = gram(xs, masks);
    const Eigen::VectorXd l = min_norm_point(Q, 1e-12);
    return std::sqrt(std::max(0.0, l.dot(Q * l)));
  };
  std::vector<int> perm(static_cast<std::size_t>(n));
  auto random_subset = [&] {
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = 0; i < k; ++i) {
      std::uniform_int_distribution<int> pick(i, n - 1);
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(pick(rng))]);
    }
    return std::vector<int>(perm.begin(), perm.begin() + k);
  };

  const int pool_size = params.starts_per_vertex * n;
  // swap-one-vertex hill climbing on the projection distance
  for (int start = 0; start < pool_size && k < n; ++start) {
    std::vector<int> cur = random_subset();
    double best = distance(cur);
    for (int step = 0; step < params.max_steps; ++step) {
      bool improved = false;
      for (int trial = 0; trial < params.swaps_per_step; ++trial) {
        std::vector<int> next = cur;
        const int out = std::uniform_int_distribution<int>(0, k - 1)(rng);
        int in = std::uniform_int_distribution<int>(0, n - 1)(rng);
        if (std::find(next.begin(), next.end(), in) != next.end()) continue;
        next[static_cast<std::size_t>(out)] = in;
        const double d = distance(next);
        if (d > best + 1e-12) {
          cur = std::move(next);
          best = d;
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
    std::sort(cur.begin(), cur.end());
    pool.emplace(cur, best);
  }
  // random fill up to pool_size distinct subsets
  for (int attempt = 0; static_cast<int>(pool.size()) < pool_size && attempt < 20 * pool_size; ++attempt) {
    std::vector<int> s = random_subset();
    std::sort(s.begin(), s.end());
    if (!pool.count(s)) pool.emplace(s, distance(s));
  }

  std::vector<Candidate> out;
  for (const auto& [members, d] : pool)
    if (d >= params.threshold) out.push_back({VertexSet(members, n), d});
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) { return a.distance > b.distance; });
  const auto keep = static_cast<std::size_t>(params.keep_per_vertex * n);
  if (out.size() > keep) out.resize(keep);
  return out;
}

bool forecast_stop(const std::vector<double>& history, double lb, int horizon, double decay, double prune_tol) {
  if (history.empty()) return false;
  const double target = lb + 1.0 - prune_tol;
  const double current = history.back();
  if (current < target) return false;
  const double avg = (history.front() - current) / static_cast<double>(history.size());
  return current - horizon * decay * avg >= target;
}

ModelStats model_stats(BoundMode mode, const Graph& g, const std::vector<EscRecord>& J) {
  ModelStats s;
  s.psd_order = g.n() + 1;
  s.equalities = g.n() + g.m() + 1;
  switch (mode) {
    case BoundMode::TH: break;
    case BoundMode::CH:
      for (const auto& r : J) {
        s.nonneg += r.ch.t;
        s.equalities += 1 + r.ch.b;
      }
      break;
    case BoundMode::VF:
      for (const auto& r : J) s.inequalities += static_cast<int>(r.facets.size());
      break;
    case BoundMode::SH: s.inequalities = static_cast<int>(J.size()); break;
  }
  return s;
}

ModelStats model_stats(const sdp::SdpModel& model) {
  return {model.block_order, model.num_nonneg(), static_cast<int>(model.equalities.size()),
          static_cast<int>(model.inequalities.size())};
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

sdp::SdpModel build_model(const Graph& g, BoundMode mode, std::vector<EscRecord>& J, int order) {
  sdp::SdpModel model = theta_model(g);
  for (auto& r : J) {
    r.cut_rows.clear();
    switch (mode) {
      case BoundMode::TH: break;
      case BoundMode::CH: r.ch = build_ch_constraints(model, g, r.subset); break;
      case BoundMode::VF: {
        const auto& lib = facet_library(order);
        for (const int f : r.facets) r.cut_rows.push_back(add_facet_cut(model, g, r.subset, lib[static_cast<std::size_t>(f)]));
        break;
      }
      case BoundMode::SH: r.cut_rows.push_back(add_hyperplane_cut(model, r.subset, *r.hyperplane)); break;
    }
  }
  return model;
}

void record_duals(BoundMode mode, const sdp::SdpSolution& sol, std::vector<EscRecord>& J) {
  for (auto& r : J) {
    double d = 0.0;
    if (mode == BoundMode::CH) {
      for (int i = 0; i <= r.ch.b; ++i) d = std::max(d, std::abs(sol.eq_duals[r.ch.first_equality + i]));
    } else {
      for (const int row : r.cut_rows) d = std::max(d, std::abs(sol.ineq_duals[row]));
    }
    r.last_dual = d;
  }
}

void fill_solution(BoundReport& rep, const Graph& g, const sdp::SdpSolution& sol) {
  const int n = g.n();
  rep.X = sol.Y.bottomRightCorner(n, n);
  rep.x = sol.Y.row(0).tail(n).transpose();
  rep.objective = sol.objective_value;
  rep.status = sol.status;
  if (sol.status != sdp::Status::optimal && sol.status != sdp::Status::cutoff) rep.degraded = true;
}

// ESC for `subset` violated by xsub in the given mode; nothing if not violated.
std::optional<EscRecord> make_esc(BoundMode mode, const Graph& g, const VertexSet& subset, const Eigen::MatrixXd& xsub,
                                  const BoundParams& params) {
  EscRecord r;
  r.subset = subset;
  switch (mode) {
    case BoundMode::TH: return std::nullopt;
    case BoundMode::CH: return r;
    case BoundMode::VF: {
      if (subset.size() != params.order) return std::nullopt;
      const auto& lib = facet_library(params.order);
      const auto sub = induced_subgraph(g, subset);
      r.facets = dedup_facets(violated_facets(xsub, lib, params.eps_facet), lib, sub.graph);
      if (r.facets.empty()) return std::nullopt;
      return r;
    }
    case BoundMode::SH: {
      const auto mats = stable_set_matrices(induced_subgraph(g, subset).graph);
      const auto proj = project_to_stab2(xsub, mats);
      r.hyperplane = separating_hyperplane(xsub, proj, mats, params.sh_threshold);
      if (!r.hyperplane) return std::nullopt;
      return r;
    }
  }
  return std::nullopt;
}

BoundReport trivial_report(BoundMode mode) {
  BoundReport rep;
  rep.mode = mode;
  rep.value = 0.0;
  rep.stats = {1, 0, 1, 0};
  return rep;
}

}  // namespace

BoundReport theta(const Graph& g, const sdp::SolverOptions& options) {
  BoundParams p;
  p.sdp = options;
  p.max_cycles = 1;
  return bound_with_escs(g, BoundMode::TH, p);
}

BoundReport bound_with_escs(const Graph& g, BoundMode mode, const BoundParams& params) {
  if (g.n() == 0) return trivial_report(mode);
  if (mode == BoundMode::VF && (params.order < kMinFacetOrder || params.order > kMaxFacetOrder))
    throw std::invalid_argument("facet library supports subgraph orders 2..6, got " + std::to_string(params.order));
  if (mode != BoundMode::VF && (params.order < 2 || params.order > kMaxShSubgraphOrder))
    throw std::invalid_argument("subgraph order must be in 2..10, got " + std::to_string(params.order));

  BoundReport rep;
  rep.mode = mode;
  std::vector<EscRecord> J;
  std::vector<double> bounds;
  SearchParams search = params.search;
  search.order = params.order;
  search.threshold = params.sh_threshold;

  int added = 0, removed = 0;
  for (int cycle = 0; cycle < params.max_cycles; ++cycle) {
    const auto t0 = std::chrono::steady_clock::now();
    sdp::SdpModel model = build_model(g, mode, J, params.order);
    sdp::SolverOptions opts = params.sdp;
    opts.deadline = params.deadline;
    if (params.lower_bound) opts.cutoff = *params.lower_bound + 1.0 - kPruneTol;
    const sdp::SdpSolution sol = sdp::solve(model, opts);
    if (sol.status == sdp::Status::infeasible) throw std::runtime_error("bound_with_escs: relaxation reported infeasible");
    const double ub = sdp::safe_upper_bound(sol, model);
    rep.value = std::min(rep.value, ub);
    bounds.push_back(ub);
    fill_solution(rep, g, sol);
    rep.stats = model_stats(model);
    rep.cycles = cycle + 1;
    record_duals(mode, sol, J);

    auto finish_cycle = [&] {
      rep.history.push_back({ub, sol.objective_value, static_cast<int>(J.size()), added, removed, seconds_since(t0)});
    };
    const bool timed_out = params.deadline && std::chrono::steady_clock::now() > *params.deadline;
    if (mode == BoundMode::TH || timed_out || cycle + 1 == params.max_cycles) {
      finish_cycle();
      break;
    }
    if (params.lower_bound) {
      if (rep.value < *params.lower_bound + 1.0 - kPruneTol) {
        finish_cycle();
        break;
      }
      // a single theta value says nothing about the rate of decrease yet
      if (bounds.size() >= 2 && forecast_stop(bounds, *params.lower_bound)) {
        finish_cycle();
        break;
      }
    }

    removed = 0;
    std::erase_if(J, [&](const EscRecord& r) {
      const bool drop = r.last_dual < params.dual_drop;
      removed += drop ? 1 : 0;
      return drop;
    });
    added = 0;
    const auto cands = find_violated_subgraphs(rep.X, g, params.seed + static_cast<std::uint64_t>(cycle), search);
    for (const auto& c : cands) {
      if (mode == BoundMode::CH &&
          std::any_of(J.begin(), J.end(), [&](const EscRecord& r) { return r.subset == c.subset; }))
        continue;
      if (auto esc = make_esc(mode, g, c.subset, submatrix(rep.X, c.subset), params)) {
        J.push_back(std::move(*esc));
        ++added;
      }
    }
    finish_cycle();
    if (added == 0) break;
  }
  rep.escs = std::move(J);
  return rep;
}

BoundReport bound_fixed_escs(const Graph& g, BoundMode mode, const std::vector<VertexSet>& J,
                             const Eigen::MatrixXd& x_ref, const BoundParams& params) {
  if (g.n() == 0) return trivial_report(mode);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<EscRecord> escs;
  for (const auto& I : J) {
    if (mode == BoundMode::CH) {
      escs.push_back({I, {}, {}, {}, {}, 0.0});
    } else if (auto esc = make_esc(mode, g, I, submatrix(x_ref, I), params)) {
      escs.push_back(std::move(*esc));
    }
  }
  sdp::SdpModel model = build_model(g, mode, escs, params.order);
  sdp::SolverOptions opts = params.sdp;
  opts.deadline = params.deadline;
  const auto sol = sdp::solve(model, opts);
  if (sol.status == sdp::Status::infeasible) throw std::runtime_error("bound_fixed_escs: relaxation reported infeasible");
  BoundReport rep;
  rep.mode = mode;
  rep.value = sdp::safe_upper_bound(sol, model);
  rep.cycles = 1;
  fill_solution(rep, g, sol);
  rep.stats = model_stats(model);
  record_duals(mode, sol, escs);
  rep.history.push_back({rep.value, sol.objective_value, static_cast<int>(escs.size()), static_cast<int>(escs.size()), 0,
                         seconds_since(t0)});
  rep.escs = std::move(escs);
  return rep;
}

std::vector<VertexSet> random_esc_set(const Graph& g, const Eigen::MatrixXd& X, int q, int k, std::uint64_t seed) {
  const int n = g.n();
  if (q <= 0 || k > n || k < 1) return {};
  std::mt19937_64 rng(seed);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::set<std::vector<int>> seen;
  std::vector<Candidate> pool;
  for (int attempt = 0; static_cast<int>(pool.size()) < 3 * q && attempt < 60 * q; ++attempt) {
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = 0; i < k; ++i)
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(std::uniform_int_distribution<int>(i, n - 1)(rng))]);
    std::vector<int> s(perm.begin(), perm.begin() + k);
    std::sort(s.begin(), s.end());
    if (!seen.insert(s).second) continue;
    VertexSet I(s, n);
    const double d = projection_distance(submatrix(X, I), stable_set_matrices(induced_subgraph(g, I).graph));
    pool.push_back({std::move(I), d});
  }
  std::stable_sort(pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) { return a.distance > b.distance; });
  std::vector<VertexSet> out;
  for (int i = 0; i < q && i < static_cast<int>(pool.size()); ++i) out.push_back(pool[static_cast<std::size_t>(i)].subset);
  return out;
}

double mean_projection_distance(const Graph& g, const Eigen::MatrixXd& X, const std::vector<VertexSet>& J) {
  if (J.empty()) return 0.0;
  double s = 0.0;
  for (const auto& I : J) s += projection_distance(submatrix(X, I), stable_set_matrices(induced_subgraph(g, I).graph));
  return s / static_cast<double>(J.size());
}

double mean_violated_facets(const Graph& g, const Eigen::MatrixXd& X, const std::vector<VertexSet>& J, double eps) {
  if (J.empty()) return 0.0;
  double s = 0.0;
  for (const auto& I : J) {
    const auto& lib = facet_library(I.size());
    s += static_cast<double>(dedup_facets(violated_facets(submatrix(X, I), lib, eps), lib, induced_subgraph(g, I).graph).size());
  }
  return s / static_cast<double>(J.size());
}

nlohmann::json to_json(const ModelStats& s) {
  return {{"psd_order", s.psd_order}, {"nonneg", s.nonneg}, {"equalities", s.equalities}, {"inequalities", s.inequalities}};
}

nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& c : r.history)
    hist.push_back({{"bound", c.bound}, {"objective", c.objective}, {"escs", c.escs}, {"added", c.added},
                    {"removed", c.removed}, {"time_s", c.seconds}});
  nlohmann::json escs = nlohmann::json::array();
  for (const auto& e : r.escs) {
    std::vector<int> labels;
    for (const auto v : e.subset) labels.push_back(v + 1);
    escs.push_back(labels);
  }
  return {{"mode", std::string(to_string(r.mode))},
          {"value", r.value},
          {"objective", r.objective},
          {"cycles", r.cycles},
          {"status", std::string(sdp::to_string(r.status))},
          {"degraded", r.degraded},
          {"stats", to_json(r.stats)},
          {"history", hist},
          {"escs", escs}};
}

}  // namespace stabset
