#include <doctest.h>

#include "oracles.hpp"
#include "stabset/esc.hpp"
#include "stabset/sdp.hpp"

#include <cmath>

using namespace stabset;

namespace {

sdp::SolverOptions method(sdp::Method m) {
  sdp::SolverOptions o;
  o.method = m;
  return o;
}

}  // namespace

TEST_CASE("theta of cycles, cliques and edgeless graphs") {
  for (const int n : {5, 7, 9, 11}) {
    CAPTURE(n);
    const auto r = theta(Graph::cycle(n));
    CHECK(r.value == doctest::Approx(oracle::theta_odd_cycle(n)).epsilon(1e-6));
  }
  CHECK(theta(Graph::complete(6)).value == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(theta(Graph::edgeless(6)).value == doctest::Approx(6.0).epsilon(1e-7));
  CHECK(theta(Graph::petersen()).value == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("interior point and admm agree") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto g = erdos_renyi(12, 0.4, seed);
    const auto model = theta_model(g);
    const auto a = sdp::solve(model, method(sdp::Method::interior_point));
    const auto b = sdp::solve(model, method(sdp::Method::admm));
    CHECK(a.status == sdp::Status::optimal);
    CHECK(b.status == sdp::Status::optimal);
    CHECK(a.objective_value == doctest::Approx(b.objective_value).epsilon(1e-5));
  }
}

TEST_CASE("safe upper bound is valid and tight at optimum") {
  const auto g = erdos_renyi(20, 0.3, 2);
  const auto model = theta_model(g);
  const auto sol = sdp::solve(model);
  const double ub = sdp::safe_upper_bound(sol, model);
  CHECK(ub >= sol.objective_value - 1e-6);
  CHECK(ub - sol.objective_value < 1e-4);

  // a perturbed dual still gives a valid bound
  auto rough = sol;
  rough.eq_duals.array() += 0.05;
  CHECK(sdp::safe_upper_bound(rough, model) >= sol.objective_value - 1e-6);
}

TEST_CASE("cutoff stops early with a valid bound") {
  const auto g = erdos_renyi(30, 0.3, 5);
  const auto model = theta_model(g);
  const auto full = sdp::solve(model);
  sdp::SolverOptions o;
  o.cutoff = full.objective_value + 0.5;
  const auto early = sdp::solve(model, o);
  CHECK(early.status == sdp::Status::cutoff);
  CHECK(early.iterations < full.iterations);
  const double ub = sdp::safe_upper_bound(early, model);
  CHECK(ub <= *o.cutoff);
  CHECK(ub >= full.objective_value - 1e-6);
}

TEST_CASE("model validation") {
  sdp::SdpModel m;
  m.block_order = 2;
  m.objective.push_back({0, 2, 1.0});
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  m.objective = {{1, 0, 1.0}};
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  m.objective = {{0, 1, std::nan("")}};
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}

TEST_CASE("infeasible model is reported") {
  // Y00 = 1 and Y00 = 2
  sdp::SdpModel m;
  m.block_order = 1;
  m.trace_bound = 3;
  m.objective.push_back({0, 0, 1.0});
  m.equalities.push_back({{{0, 0, 1.0}}, {}, 1.0});
  m.equalities.push_back({{{0, 0, 1.0}}, {}, 2.0});
  const auto sol = sdp::solve(m);
  CHECK(sol.status != sdp::Status::optimal);
}
