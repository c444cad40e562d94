#include <doctest.h>

#include "oracles.hpp"
#include "stabset/bnb.hpp"

using namespace stabset;

TEST_CASE("branch variable is closest to one half") {
  Eigen::VectorXd x(4);
  x << 0.9, 0.4, 0.6, 0.1;
  CHECK(bnb::select_branch_var(x) == 1);
}

TEST_CASE("branching and trail replay agree") {
  const auto g = Graph::cycle(6);
  const auto root = bnb::root_node(g);
  auto [one, zero] = bnb::branch(root, 2);
  CHECK(one.offset == 1);
  CHECK(one.graph.n() == 3);
  CHECK(zero.graph.n() == 5);
  auto [a, b] = bnb::branch(one, 0);
  for (const auto* node : {&one, &zero, &a, &b}) {
    const auto r = bnb::replay_trail(g, node->trail);
    CHECK(r.graph == node->graph);
    CHECK(r.original == node->original);
  }
  CHECK_THROWS_AS(bnb::branch(root, 6), std::invalid_argument);
}

TEST_CASE("solve is exact in every mode") {
  for (std::uint64_t s = 0; s < 6; ++s) {
    const auto g = erdos_renyi(26 + static_cast<int>(s), 0.2 + 0.05 * static_cast<double>(s % 3), s);
    const int alpha = oracle::clique_alpha(g);
    for (const auto mode : {BoundMode::TH, BoundMode::CH, BoundMode::VF, BoundMode::SH}) {
      CAPTURE(s);
      CAPTURE(to_string(mode));
      bnb::Config cfg;
      cfg.mode = mode;
      cfg.leaf_size = 12;
      const auto r = bnb::solve(g, cfg);
      CHECK(r.optimal);
      CHECK(r.lower_bound == alpha);
      CHECK(r.upper_bound == alpha);
      CHECK(static_cast<int>(r.witness.size()) == alpha);
      CHECK(g.is_stable(r.witness));
    }
  }
}

TEST_CASE("threads give the same alpha") {
  const auto g = erdos_renyi(40, 0.15, 2);
  bnb::Config cfg;
  cfg.leaf_size = 15;
  const auto one = bnb::solve(g, cfg);
  cfg.threads = 3;
  const auto many = bnb::solve(g, cfg);
  CHECK(one.lower_bound == many.lower_bound);
  CHECK_FALSE(many.deterministic);
}

TEST_CASE("report json") {
  const auto g = Graph::cycle(5);
  const auto r = bnb::solve(g);
  const auto j = bnb::to_json(r, {}, "c5");
  CHECK(j["alpha"] == 2);
  CHECK(j["status"] == "optimal");
  CHECK(j["witness"].size() == 2);
  for (const auto& v : j["witness"]) CHECK(v.get<int>() >= 1);
}

TEST_CASE("zero time limit reports a timeout with valid bounds") {
  const auto g = erdos_renyi(60, 0.2, 4);
  bnb::Config cfg;
  cfg.time_limit_s = 0.0;
  const auto r = bnb::solve(g, cfg);
  CHECK_FALSE(r.optimal);
  CHECK(r.lower_bound <= r.upper_bound);
  CHECK(g.is_stable(r.witness));
}
