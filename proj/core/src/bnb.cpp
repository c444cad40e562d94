#include "stabset/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace stabset::bnb {

Node root_node(const Graph& g) {
  Node r;
  r.graph = g;
  r.original.resize(static_cast<std::size_t>(g.n()));
  for (int v = 0; v < g.n(); ++v) r.original[static_cast<std::size_t>(v)] = v;
  r.inherited_ub = g.n();
  return r;
}

namespace {

std::vector<Vertex> compose(const std::vector<Vertex>& outer, const std::vector<Vertex>& inner) {
  std::vector<Vertex> out(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) out[i] = outer[static_cast<std::size_t>(inner[i])];
  return out;
}

}  // namespace

std::pair<Node, Node> branch(const Node& node, Vertex i) {
  if (i < 0 || i >= node.graph.n()) throw std::invalid_argument("branch: vertex not in residual graph");
  const Vertex orig = node.original[static_cast<std::size_t>(i)];
  Node one;
  auto a = delete_closed_neighborhood(node.graph, i);
  one.graph = std::move(a.graph);
  one.original = compose(node.original, a.original);
  one.offset = node.offset + 1;
  one.trail = node.trail;
  one.trail.push_back({orig, 1});
  one.inherited_ub = node.inherited_ub;
  one.depth = node.depth + 1;

  Node zero;
  auto b = delete_vertex(node.graph, i);
  zero.graph = std::move(b.graph);
  zero.original = compose(node.original, b.original);
  zero.offset = node.offset;
  zero.trail = node.trail;
  zero.trail.push_back({orig, 0});
  zero.inherited_ub = node.inherited_ub;
  zero.depth = node.depth + 1;
  return {std::move(one), std::move(zero)};
}

MappedGraph replay_trail(const Graph& original, const std::vector<Fixing>& trail) {
  std::vector<char> keep(static_cast<std::size_t>(original.n()), 1);
  for (const auto& f : trail) {
    keep[static_cast<std::size_t>(f.vertex)] = 0;
    if (f.value == 1)
      for (const Vertex u : original.neighbors(f.vertex)) keep[static_cast<std::size_t>(u)] = 0;
  }
  std::vector<Vertex> members;
  for (int v = 0; v < original.n(); ++v)
    if (keep[static_cast<std::size_t>(v)]) members.push_back(v);
  return induced_subgraph(original, VertexSet(members, original.n()));
}

Vertex select_branch_var(const Eigen::VectorXd& x) {
  if (x.size() == 0) throw std::invalid_argument("select_branch_var: empty vector");
  Vertex best = 0;
  for (Eigen::Index i = 1; i < x.size(); ++i)
    if (std::abs(x[i] - 0.5) < std::abs(x[best] - 0.5)) best = static_cast<Vertex>(i);
  return best;
}

namespace {

using Clock = std::chrono::steady_clock;

bool heap_less(const Node& a, const Node& b) {
  if (a.inherited_ub != b.inherited_ub) return a.inherited_ub < b.inherited_ub;
  return a.id > b.id;
}

// Fixes isolated residual vertices to 1.
void fix_isolated(Node& node) {
  std::vector<char> keep(static_cast<std::size_t>(node.graph.n()), 1);
  int fixed = 0;
  for (int v = 0; v < node.graph.n(); ++v)
    if (node.graph.degree(v) == 0) {
      keep[static_cast<std::size_t>(v)] = 0;
      node.trail.push_back({node.original[static_cast<std::size_t>(v)], 1});
      ++fixed;
    }
  if (fixed == 0) return;
  std::vector<Vertex> members;
  for (int v = 0; v < node.graph.n(); ++v)
    if (keep[static_cast<std::size_t>(v)]) members.push_back(v);
  auto sub = induced_subgraph(node.graph, VertexSet(members, node.graph.n()));
  node.graph = std::move(sub.graph);
  node.original = compose(node.original, sub.original);
  node.offset += fixed;
}

std::vector<Vertex> with_trail(std::vector<Vertex> set, const std::vector<Fixing>& trail) {
  for (const auto& f : trail)
    if (f.value == 1) set.push_back(f.vertex);
  std::sort(set.begin(), set.end());
  return set;
}

struct Shared {
  std::mutex mu;
  std::condition_variable cv;
  std::vector<Node> open;  // max-heap under heap_less
  int active = 0;
  bool stop = false;
  Incumbent best;
  std::int64_t next_id = 1;
  std::int64_t next_index = 0;
  Result res;
};

struct Outcome {
  std::vector<Node> children;
  std::optional<std::vector<Vertex>> found;
  NodeSummary summary;
};

Outcome process(Node node, std::int64_t index, int lb, const Graph& g, const Config& cfg,
                std::optional<Clock::time_point> deadline) {
  const auto t0 = Clock::now();
  Outcome out;
  out.summary.id = node.id;
  out.summary.depth = node.depth;
  if (cfg.fix_isolated) fix_isolated(node);
  out.summary.vertices = node.graph.n();
  out.summary.offset = node.offset;

  if (node.graph.n() <= cfg.leaf_size) {
    const auto a = alpha_exact(node.graph, std::max(cfg.leaf_size, node.graph.n()));
    out.found = with_trail(compose(node.original, a.witness), node.trail);
    out.summary.bound = node.offset + a.alpha;
    out.summary.outcome = "leaf";
  } else {
    BoundParams params;
    params.order = cfg.subgraph_order;
    params.eps_facet = cfg.eps_facet;
    params.max_cycles = cfg.max_cycles;
    params.lower_bound = static_cast<double>(lb - node.offset);
    params.seed = cfg.seed + static_cast<std::uint64_t>(node.id);
    params.deadline = deadline;
    params.sdp = cfg.sdp;
    const auto rep = bound_with_escs(node.graph, cfg.mode, params);
    const double ub = std::min(node.inherited_ub, node.offset + rep.value);
    out.summary.bound = ub;
    out.summary.cycles = rep.cycles;

    HeuristicOptions h = cfg.heuristics;
    h.seed = cfg.seed;
    if (auto s = heuristic_schedule(static_cast<int>(index), node.graph, rep.x, node.original, h)) {
      auto cand = with_trail(std::move(*s), node.trail);
      if (static_cast<int>(cand.size()) > lb && g.is_stable(cand)) {
        lb = static_cast<int>(cand.size());
        out.found = std::move(cand);
      }
    }
    if (ub < lb + 1.0 - kPruneTol) {
      out.summary.outcome = "pruned";
    } else {
      auto [one, zero] = branch(node, select_branch_var(rep.x));
      one.inherited_ub = ub;
      zero.inherited_ub = ub;
      out.children.push_back(std::move(one));
      out.children.push_back(std::move(zero));
      out.summary.outcome = "branched";
    }
  }
  out.summary.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return out;
}

void worker(Shared& sh, const Graph& g, const Config& cfg, std::optional<Clock::time_point> deadline) {
  std::unique_lock lock(sh.mu);
  for (;;) {
    sh.cv.wait(lock, [&] { return sh.stop || !sh.open.empty() || sh.active == 0; });
    if (sh.stop || sh.open.empty()) {
      sh.cv.notify_all();
      return;
    }
    if (deadline && Clock::now() > *deadline) {
      sh.stop = true;
      sh.cv.notify_all();
      return;
    }
    std::pop_heap(sh.open.begin(), sh.open.end(), heap_less);
    Node node = std::move(sh.open.back());
    sh.open.pop_back();
    ++sh.res.nodes;
    if (node.inherited_ub < sh.best.value + 1.0 - kPruneTol) {
      ++sh.res.pruned;
      if (cfg.record_nodes)
        sh.res.per_node.push_back({node.id, node.depth, node.graph.n(), node.offset, node.inherited_ub, 0, "pruned", 0.0});
      continue;
    }
    const std::int64_t index = sh.next_index++;
    const int lb = sh.best.value;
    ++sh.active;
    lock.unlock();
    Outcome out;
    std::exception_ptr err;
    try {
      out = process(std::move(node), index, lb, g, cfg, deadline);
    } catch (...) {
      err = std::current_exception();
    }
    lock.lock();
    --sh.active;
    if (err) {
      sh.stop = true;
      sh.cv.notify_all();
      std::rethrow_exception(err);
    }
    if (out.found && static_cast<int>(out.found->size()) > sh.best.value) {
      sh.best.value = static_cast<int>(out.found->size());
      sh.best.witness = std::move(*out.found);
    }
    if (out.summary.outcome == "leaf") ++sh.res.leaves;
    if (out.summary.outcome == "pruned") ++sh.res.pruned;
    if (out.summary.outcome != "leaf") ++sh.res.bounded;
    sh.res.sdp_cycles += out.summary.cycles;
    if (cfg.record_nodes) sh.res.per_node.push_back(out.summary);
    for (auto& c : out.children) {
      c.id = sh.next_id++;
      sh.open.push_back(std::move(c));
      std::push_heap(sh.open.begin(), sh.open.end(), heap_less);
    }
    sh.cv.notify_all();
  }
}

}  // namespace

Result solve(const Graph& g, const Config& cfg) {
  if (cfg.leaf_size < 0 || cfg.leaf_size > kMaxStableSetOrder)
    throw std::invalid_argument("leaf size must be in 0.." + std::to_string(kMaxStableSetOrder));
  if (cfg.mode == BoundMode::VF && (cfg.subgraph_order < kMinFacetOrder || cfg.subgraph_order > kMaxFacetOrder))
    throw std::invalid_argument("facet library supports subgraph orders 2..6, got " + std::to_string(cfg.subgraph_order));
  const auto t0 = Clock::now();
  std::optional<Clock::time_point> deadline;
  if (cfg.time_limit_s)
    deadline = t0 + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(*cfg.time_limit_s));

  Shared sh;
  sh.res.deterministic = cfg.threads <= 1;
  sh.open.push_back(root_node(g));
  // cheap incumbent before the root bound so the forecast has something to aim at
  if (g.n() > cfg.leaf_size) {
    sh.best.witness = iterated_local_search(g, heuristic_vertex_cover(g), 5 * cfg.heuristics.kicks_per_escape,
                                            cfg.seed ^ cfg.heuristics.seed);
    sh.best.value = static_cast<int>(sh.best.witness.size());
  }

  const int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    worker(sh, g, cfg, deadline);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          worker(sh, g, cfg, deadline);
        } catch (...) {
          errors[static_cast<std::size_t>(t)] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  Result res = std::move(sh.res);
  res.lower_bound = sh.best.value;
  res.witness = sh.best.witness;
  double ub = sh.best.value;
  for (const auto& n : sh.open) ub = std::max(ub, n.inherited_ub);
  res.upper_bound = std::max(sh.best.value, static_cast<int>(std::floor(ub + kPruneTol)));
  res.optimal = sh.open.empty() && !sh.stop;
  if (res.optimal) res.upper_bound = res.lower_bound;
  res.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return res;
}

nlohmann::json to_json(const Result& r, const Config& cfg, const std::string& instance) {
  nlohmann::json j;
  j["instance"] = instance;
  j["mode"] = std::string(to_string(cfg.mode));
  j["status"] = r.optimal ? "optimal" : "timeout";
  j["timeout"] = !r.optimal;
  if (r.optimal) j["alpha"] = r.lower_bound;
  j["lb"] = r.lower_bound;
  j["ub"] = r.upper_bound;
  std::vector<int> labels;
  for (const auto v : r.witness) labels.push_back(v + 1);
  j["witness"] = labels;
  j["nodes"] = r.nodes;
  j["leaves"] = r.leaves;
  j["pruned"] = r.pruned;
  j["bounded"] = r.bounded;
  j["sdp_cycles"] = r.sdp_cycles;
  j["config"] = {{"seed", cfg.seed},
                 {"leaf_size", cfg.leaf_size},
                 {"eps_facet", cfg.eps_facet},
                 {"subgraph_order", cfg.subgraph_order},
                 {"max_cycles", cfg.max_cycles},
                 {"threads", cfg.threads},
                 {"fix_isolated", cfg.fix_isolated}};
  j["deterministic"] = r.deterministic;
  j["time_s"] = r.seconds;
  if (!r.per_node.empty()) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : r.per_node)
      nodes.push_back({{"id", n.id},
                       {"depth", n.depth},
                       {"vertices", n.vertices},
                       {"offset", n.offset},
                       {"bound", n.bound},
                       {"cycles", n.cycles},
                       {"outcome", n.outcome},
                       {"time_s", n.seconds}});
    j["per_node"] = nodes;
  }
  return j;
}

}  // namespace stabset::bnb
