#include <doctest.h>

#include "stabset/exact_enum.hpp"
#include "stabset/heuristics.hpp"

using namespace stabset;

TEST_CASE("theta rounding follows x and stays stable") {
  const auto g = Graph::path(4);
  Eigen::VectorXd x(4);
  x << 0.2, 0.9, 0.1, 0.8;
  CHECK(heuristic_theta_round(g, x) == std::vector<Vertex>{1, 3});
  // equal values keep index order
  CHECK(heuristic_theta_round(g, Eigen::VectorXd::Constant(4, 0.5)) == std::vector<Vertex>{0, 2});
  CHECK_THROWS_AS(heuristic_theta_round(g, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("vertex cover heuristic") {
  // star: the centre has minimum support, its leaves are never covered
  const Graph star(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  CHECK(heuristic_vertex_cover(star) == std::vector<Vertex>{1, 2, 3, 4});
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto g = erdos_renyi(20, 0.25, s);
    const auto set = heuristic_vertex_cover(g);
    CHECK(g.is_stable(set));
  }
  CHECK(heuristic_vertex_cover(Graph::edgeless(3)).size() == 3);
}

TEST_CASE("local search improves and stays stable") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto g = erdos_renyi(22, 0.3, s);
    const std::vector<Vertex> start{};
    const auto set = iterated_local_search(g, start, 50, s);
    CHECK(g.is_stable(set));
    CHECK(static_cast<int>(set.size()) <= alpha_exact(g).alpha);
    CHECK(set == iterated_local_search(g, start, 50, s));
  }
  CHECK(iterated_local_search(Graph::edgeless(4), {}, 5, 0).size() == 4);
  CHECK_THROWS_AS(iterated_local_search(Graph::path(2), {0, 1}, 1, 0), std::invalid_argument);
}

TEST_CASE("schedule runs on every third node") {
  const auto g = Graph::cycle(7);
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(7, 3.0 / 7.0);
  std::vector<Vertex> original(7);
  for (int v = 0; v < 7; ++v) original[static_cast<std::size_t>(v)] = 10 + v;
  CHECK_FALSE(heuristic_schedule(1, g, x, original).has_value());
  CHECK_FALSE(heuristic_schedule(2, g, x, original).has_value());
  const auto s = heuristic_schedule(3, g, x, original);
  REQUIRE(s.has_value());
  CHECK(s->size() == 3);
  for (const auto v : *s) CHECK(v >= 10);

  int calls = 0;
  HeuristicOptions opts;
  opts.hook = [&](const Graph& h, int escapes, std::chrono::steady_clock::time_point) {
    (void)h;
    ++calls;
    CHECK((escapes == 1 || escapes == 5));
    return std::vector<Vertex>{0, 2, 4};
  };
  heuristic_schedule(0, g, x, original, opts);
  CHECK(calls == 2);
}
