#include "stabset/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace stabset {

namespace {

std::vector<Vertex> greedy_in_order(const Graph& g, const std::vector<Vertex>& order) {
  std::vector<char> blocked(static_cast<std::size_t>(g.n()), 0);
  std::vector<Vertex> s;
  for (const Vertex v : order) {
    if (blocked[static_cast<std::size_t>(v)]) continue;
    s.push_back(v);
    blocked[static_cast<std::size_t>(v)] = 1;
    for (const Vertex u : g.neighbors(v)) blocked[static_cast<std::size_t>(u)] = 1;
  }
  std::sort(s.begin(), s.end());
  return s;
}

long long rounded(double v) { return std::llround(v * 1e6); }

void check_length(const Graph& g, const Eigen::VectorXd& x) {
  if (x.size() != g.n()) throw std::invalid_argument("heuristic: x has wrong length");
}

}  // namespace

std::vector<Vertex> heuristic_theta_round(const Graph& g, const Eigen::VectorXd& x) {
  check_length(g, x);
  std::vector<Vertex> order(static_cast<std::size_t>(g.n()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return rounded(x[a]) > rounded(x[b]); });
  return greedy_in_order(g, order);
}

std::vector<Vertex> randomized_theta_round(const Graph& g, const Eigen::VectorXd& x, int rounds, std::uint64_t seed) {
  check_length(g, x);
  std::mt19937_64 rng(seed);
  std::vector<Vertex> best = heuristic_theta_round(g, x);
  std::vector<Vertex> order(static_cast<std::size_t>(g.n()));
  for (int r = 0; r < rounds; ++r) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return rounded(x[a]) > rounded(x[b]); });
    auto s = greedy_in_order(g, order);
    if (s.size() > best.size()) best = std::move(s);
  }
  return best;
}

namespace {

// Solution state for the swap local search: tight[v] counts neighbors in S.
struct SwapState {
  const Graph* g;
  std::vector<char> in;
  std::vector<int> tight;
  int size = 0;

  SwapState(const Graph& graph, const std::vector<Vertex>& start)
      : g(&graph), in(static_cast<std::size_t>(graph.n()), 0), tight(static_cast<std::size_t>(graph.n()), 0) {
    for (const Vertex v : start) insert(v);
  }
  void insert(Vertex v) {
    in[static_cast<std::size_t>(v)] = 1;
    ++size;
    for (const Vertex u : g->neighbors(v)) ++tight[static_cast<std::size_t>(u)];
  }
  void erase(Vertex v) {
    in[static_cast<std::size_t>(v)] = 0;
    --size;
    for (const Vertex u : g->neighbors(v)) --tight[static_cast<std::size_t>(u)];
  }
  void fill_free() {
    for (Vertex v = 0; v < g->n(); ++v)
      if (!in[static_cast<std::size_t>(v)] && tight[static_cast<std::size_t>(v)] == 0) insert(v);
  }
  // One (1,2)-swap: drop x, add two non-adjacent neighbors whose only solution neighbor is x.
  bool improve() {
    for (Vertex x = 0; x < g->n(); ++x) {
      if (!in[static_cast<std::size_t>(x)]) continue;
      std::vector<Vertex> cand;
      for (const Vertex u : g->neighbors(x))
        if (tight[static_cast<std::size_t>(u)] == 1) cand.push_back(u);
      for (std::size_t a = 0; a < cand.size(); ++a)
        for (std::size_t b = a + 1; b < cand.size(); ++b) {
          if (g->adjacent(cand[a], cand[b])) continue;
          erase(x);
          insert(cand[a]);
          insert(cand[b]);
          fill_free();
          return true;
        }
    }
    return false;
  }
  std::vector<Vertex> members() const {
    std::vector<Vertex> s;
    for (Vertex v = 0; v < g->n(); ++v)
      if (in[static_cast<std::size_t>(v)]) s.push_back(v);
    return s;
  }
};

}  // namespace

std::vector<Vertex> iterated_local_search(const Graph& g, const std::vector<Vertex>& start, int kicks, std::uint64_t seed) {
  if (!g.is_stable(start)) throw std::invalid_argument("iterated_local_search: start is not stable");
  SwapState st(g, start);
  st.fill_free();
  while (st.improve()) {
  }
  std::vector<Vertex> best = st.members();
  if (g.n() == 0) return best;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Vertex> pick(0, g.n() - 1);
  for (int k = 0; k < kicks && st.size < g.n(); ++k) {
    SwapState trial = st;
    Vertex v = pick(rng);
    while (trial.in[static_cast<std::size_t>(v)]) v = pick(rng);
    for (const Vertex u : g.neighbors(v))
      if (trial.in[static_cast<std::size_t>(u)]) trial.erase(u);
    trial.insert(v);
    trial.fill_free();
    while (trial.improve()) {
    }
    if (trial.size >= st.size) st = std::move(trial);
    if (st.size > static_cast<int>(best.size())) best = st.members();
  }
  return best;
}

std::vector<Vertex> heuristic_vertex_cover(const Graph& g) {
  const int n = g.n();
  std::vector<std::vector<char>> alive(static_cast<std::size_t>(n));
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v) {
    alive[static_cast<std::size_t>(v)].assign(g.neighbors(v).size(), 1);
    deg[static_cast<std::size_t>(v)] = g.degree(v);
  }
  std::vector<char> in_cover(static_cast<std::size_t>(n), 0);
  int edges = g.m();
  std::vector<long long> support(static_cast<std::size_t>(n));
  while (edges > 0) {
    for (int v = 0; v < n; ++v) {
      long long s = 0;
      const auto nb = g.neighbors(v);
      for (std::size_t t = 0; t < nb.size(); ++t)
        if (alive[static_cast<std::size_t>(v)][t]) s += deg[static_cast<std::size_t>(nb[t])];
      support[static_cast<std::size_t>(v)] = s;
    }
    long long min_support = -1;
    for (int v = 0; v < n; ++v)
      if (deg[static_cast<std::size_t>(v)] > 0 && (min_support < 0 || support[static_cast<std::size_t>(v)] < min_support))
        min_support = support[static_cast<std::size_t>(v)];
    int pick = -1;
    for (int v = 0; v < n; ++v) {
      if (deg[static_cast<std::size_t>(v)] == 0 || support[static_cast<std::size_t>(v)] != min_support) continue;
      const auto nb = g.neighbors(v);
      for (std::size_t t = 0; t < nb.size(); ++t) {
        if (!alive[static_cast<std::size_t>(v)][t]) continue;
        const int u = nb[t];
        if (pick < 0) {
          pick = u;
          continue;
        }
        const auto key_u = std::make_tuple(support[static_cast<std::size_t>(u)], deg[static_cast<std::size_t>(u)], -u);
        const auto key_p = std::make_tuple(support[static_cast<std::size_t>(pick)], deg[static_cast<std::size_t>(pick)], -pick);
        if (key_u > key_p) pick = u;
      }
    }
    in_cover[static_cast<std::size_t>(pick)] = 1;
    const auto nb = g.neighbors(pick);
    for (std::size_t t = 0; t < nb.size(); ++t) {
      if (!alive[static_cast<std::size_t>(pick)][t]) continue;
      alive[static_cast<std::size_t>(pick)][t] = 0;
      const int u = nb[t];
      const auto nu = g.neighbors(u);
      const auto it = std::lower_bound(nu.begin(), nu.end(), pick);
      alive[static_cast<std::size_t>(u)][static_cast<std::size_t>(it - nu.begin())] = 0;
      --deg[static_cast<std::size_t>(u)];
      --deg[static_cast<std::size_t>(pick)];
      --edges;
    }
  }
  std::vector<Vertex> s;
  for (int v = 0; v < n; ++v)
    if (!in_cover[static_cast<std::size_t>(v)]) s.push_back(v);
  return s;
}

std::optional<std::vector<Vertex>> heuristic_schedule(int node_index, const Graph& g, const Eigen::VectorXd& x,
                                                      const std::vector<Vertex>& original,
                                                      const HeuristicOptions& options) {
  if (node_index % 3 != 0) return std::nullopt;
  std::vector<Vertex> best = heuristic_theta_round(g, x);
  auto consider = [&](std::vector<Vertex> s) {
    if (s.size() > best.size() && g.is_stable(s)) best = std::move(s);
  };
  consider(heuristic_vertex_cover(g));

  std::mt19937_64 rng(options.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(node_index + 1)));
  using namespace std::chrono_literals;
  std::vector<std::pair<int, std::chrono::milliseconds>> slots;
  if (node_index == 0)
    slots.emplace_back(5, 20000ms);
  else if (node_index < 10)
    slots.emplace_back(5, 7000ms);
  if (g.n() < 200)
    slots.emplace_back(1, 1000ms);
  else if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.05)
    slots.emplace_back(5, 7000ms);
  else
    slots.emplace_back(1, 3000ms);
  for (const auto& [escapes, limit] : slots) {
    if (options.hook)
      consider(options.hook(g, escapes, std::chrono::steady_clock::now() + limit));
    else
      consider(iterated_local_search(g, randomized_theta_round(g, x, options.shuffles, rng()),
                                     options.kicks_per_escape * escapes, rng()));
  }

  for (auto& v : best) v = original[static_cast<std::size_t>(v)];
  std::sort(best.begin(), best.end());
  return best;
}

}  // namespace stabset
