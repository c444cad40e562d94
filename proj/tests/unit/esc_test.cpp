#include <doctest.h>

#include "stabset/esc.hpp"
#include "stabset/exact_enum.hpp"

#include <random>

using namespace stabset;

namespace {

// Random point of the form "mix of stable set matrices plus noise".
Eigen::MatrixXd random_xsub(const std::vector<StableSetMatrix>& mats, std::mt19937_64& rng, double noise) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto k = mats.front().entries.rows();
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(k, k);
  double total = 0.0;
  for (const auto& s : mats) {
    const double w = u(rng);
    x += w * s.entries;
    total += w;
  }
  x /= total;
  Eigen::MatrixXd e(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b <= a; ++b) e(a, b) = e(b, a) = noise * (2.0 * u(rng) - 1.0);
  return x + e;
}

}  // namespace

TEST_CASE("mode names") {
  CHECK(parse_bound_mode("VF") == BoundMode::VF);
  CHECK(to_string(BoundMode::CH) == "ch");
  CHECK_THROWS_AS(parse_bound_mode("bd"), std::invalid_argument);
}

TEST_CASE("theta model shape") {
  const auto g = Graph::cycle(5);
  const auto m = theta_model(g);
  CHECK(m.block_order == 6);
  CHECK(m.equalities.size() == 1 + 5 + 5);
  CHECK(model_stats(m) == model_stats(BoundMode::TH, g, {}));
}

TEST_CASE("projection of an interior point is itself") {
  const auto mats = stable_set_matrices(Graph::path(4));
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd x = random_xsub(mats, rng, 0.0);
  const auto p = project_to_stab2(x, mats);
  CHECK(p.distance < 1e-6);
  CHECK_FALSE(separating_hyperplane(x, p, mats).has_value());
}

TEST_CASE("projection optimality and hyperplane validity") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const int k = 2 + trial % 5;
    const auto g = erdos_renyi(k, 0.4, static_cast<std::uint64_t>(trial));
    const auto mats = stable_set_matrices(g);
    const Eigen::MatrixXd x = random_xsub(mats, rng, 0.4);
    const auto p = project_to_stab2(x, mats);
    CHECK(p.fw_gap <= 1e-7);
    CHECK(p.lambda.minCoeff() >= 0.0);
    CHECK(p.lambda.sum() == doctest::Approx(1.0));
    CHECK(projection_distance(x, mats) == doctest::Approx(p.distance).epsilon(1e-6));
    // first-order condition: <X - P, S - P> <= 0 for all S
    for (const auto& s : mats) CHECK(((x - p.P).cwiseProduct(s.entries - p.P)).sum() <= 1e-7);
    if (const auto cut = separating_hyperplane(x, p, mats, 1e-6)) {
      for (const auto& s : mats) CHECK((cut->H.cwiseProduct(s.entries)).sum() <= cut->h + 1e-12);
      CHECK((cut->H.cwiseProduct(x)).sum() - cut->h == doctest::Approx(p.distance).epsilon(1e-8));
    }
  }
}

TEST_CASE("forecast stop") {
  // no history, or already prunable
  CHECK_FALSE(forecast_stop({}, 10));
  CHECK_FALSE(forecast_stop({10.5}, 10));
  // slow decrease far from target: stop
  CHECK(forecast_stop({12.0, 11.99, 11.98}, 10));
  // fast decrease: keep going
  CHECK_FALSE(forecast_stop({12.0, 11.5, 11.2}, 10));
}

TEST_CASE("ch constraints count stable sets and non-edges") {
  const auto g = Graph::cycle(5);
  auto model = theta_model(g);
  const VertexSet I({0, 1, 2}, 5);
  const auto blk = build_ch_constraints(model, g, I);
  CHECK(blk.t == 5);  // {}, {0}, {1}, {2}, {0,2}
  CHECK(blk.b == 3 + 1);
  CHECK(model.num_nonneg() == 5);
  EscRecord r;
  r.subset = I;
  r.ch = blk;
  CHECK(model_stats(model) == model_stats(BoundMode::CH, g, {r}));
}

TEST_CASE("subgraph search returns distinct ranked subsets") {
  const auto g = erdos_renyi(25, 0.3, 3);
  const auto th = theta(g);
  const auto c = find_violated_subgraphs(th.X, g, 11);
  REQUIRE_FALSE(c.empty());
  CHECK(c.size() <= 75);
  for (std::size_t i = 1; i < c.size(); ++i) {
    CHECK(c[i - 1].distance >= c[i].distance);
    CHECK(c[i].distance >= kHyperplaneThreshold);
  }
  for (const auto& x : c) CHECK(x.subset.size() == kDefaultSubgraphOrder);
  // same seed, same answer
  const auto again = find_violated_subgraphs(th.X, g, 11);
  REQUIRE(again.size() == c.size());
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(again[i].subset == c[i].subset);
}

TEST_CASE("bounds sit between alpha and theta") {
  const auto g = erdos_renyi(18, 0.3, 9);
  const int alpha = alpha_exact(g).alpha;
  const double th = theta(g).value;
  for (const auto mode : {BoundMode::CH, BoundMode::VF, BoundMode::SH}) {
    CAPTURE(to_string(mode));
    BoundParams p;
    p.max_cycles = 3;
    const auto r = bound_with_escs(g, mode, p);
    CHECK(r.value >= alpha - 1e-6);
    CHECK(r.value <= th + 1e-6);
    CHECK_FALSE(r.degraded);
  }
}

TEST_CASE("loop stops at once when the incumbent prunes") {
  const auto g = erdos_renyi(20, 0.3, 1);
  BoundParams p;
  p.lower_bound = g.n();
  const auto r = bound_with_escs(g, BoundMode::VF, p);
  CHECK(r.cycles == 1);
}

TEST_CASE("empty graph gives zero") {
  CHECK(bound_with_escs(Graph(0, {}), BoundMode::SH).value == 0.0);
}
