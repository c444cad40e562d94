#include <doctest.h>

#include "oracles.hpp"
#include "stabset/exact_enum.hpp"

#include <bit>

using namespace stabset;

TEST_CASE("alpha of named graphs") {
  CHECK(alpha_exact(Graph::cycle(5)).alpha == 2);
  CHECK(alpha_exact(Graph::cycle(8)).alpha == 4);
  CHECK(alpha_exact(Graph::petersen()).alpha == 4);
  CHECK(alpha_exact(Graph::complete(9)).alpha == 1);
  CHECK(alpha_exact(Graph::edgeless(11)).alpha == 11);
  CHECK(alpha_exact(Graph(0, {})).alpha == 0);
}

TEST_CASE("alpha matches subset scan and witness is stable") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto g = erdos_renyi(8 + static_cast<int>(seed % 9), 0.15 + 0.03 * static_cast<double>(seed % 10), seed);
    const auto r = alpha_exact(g);
    CHECK(r.alpha == oracle::brute_alpha(g));
    CHECK(static_cast<int>(r.witness.size()) == r.alpha);
    CHECK(g.is_stable(r.witness));
  }
}

TEST_CASE("alpha refuses large graphs") {
  CHECK_THROWS_AS(alpha_exact(Graph::edgeless(30)), TooLargeError);
  CHECK(alpha_exact(Graph::edgeless(24), 24).alpha == 24);
}

TEST_CASE("stable sets are ordered by size then lexicographically") {
  const auto sets = stable_sets(Graph::path(3));
  // {}, {0}, {1}, {2}, {0,2}
  REQUIRE(sets.size() == 5);
  CHECK(sets[0] == 0);
  CHECK(sets[1] == 1);
  CHECK(sets[2] == 2);
  CHECK(sets[3] == 4);
  CHECK(sets[4] == 5);
  CHECK(stable_sets(Graph::edgeless(6)).size() == 64);
  CHECK(characteristic_vector(5, 3) == std::vector<int>{1, 0, 1});
}
