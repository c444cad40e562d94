#include <doctest.h>

#include "oracles.hpp"
#include "stabset/exact_enum.hpp"
#include "stabset/stab2.hpp"

#include <random>
#include <sstream>

using namespace stabset;

TEST_CASE("triangle indexing") {
  CHECK(triangle_size(4) == 10);
  CHECK(triangle_index(4, 0, 0) == 0);
  CHECK(triangle_index(4, 0, 3) == 3);
  CHECK(triangle_index(4, 1, 1) == 4);
  CHECK(triangle_index(4, 3, 3) == 9);
}

TEST_CASE("stable set matrices are outer products") {
  const auto mats = stable_set_matrices(Graph::path(3));
  REQUIRE(mats.size() == 5);
  for (const auto& s : mats) {
    Eigen::VectorXd v(3);
    for (int i = 0; i < 3; ++i) v[i] = (s.source >> i) & 1U;
    CHECK((s.entries - v * v.transpose()).norm() == 0.0);
  }
}

TEST_CASE("facets match the rational hull oracle for k <= 4") {
  for (int k = 2; k <= 4; ++k) {
    CAPTURE(k);
    CHECK(enumerate_facets(k) == oracle::hull_facets(k));
  }
}

TEST_CASE("facets are valid and tight") {
  const auto facets = enumerate_facets(4);
  const auto mats = stable_set_matrices(Graph::edgeless(4));
  for (const auto& f : facets) {
    int tight = 0;
    for (const auto& s : mats) {
      const double v = f.value(s.entries);
      CHECK(v <= static_cast<double>(f.rhs) + 1e-12);
      tight += std::abs(v - static_cast<double>(f.rhs)) < 1e-12;
    }
    CHECK(tight >= triangle_size(4));
    CHECK((f.matrix().cwiseProduct(mats.back().entries)).sum() == doctest::Approx(f.value(mats.back().entries)));
  }
}

TEST_CASE("enumeration rejects orders outside 2..6") {
  CHECK_THROWS_AS(enumerate_facets(1), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_facets(7), std::invalid_argument);
}

TEST_CASE("expired deadline raises BudgetExceeded") {
  EnumerationOptions opts;
  opts.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  CHECK_THROWS_AS(enumerate_facets(5, opts), BudgetExceeded);
}

TEST_CASE("facet file round trip and checksum") {
  const auto facets = enumerate_facets(3);
  std::stringstream ss;
  write_facet_file(ss, 3, facets);
  const std::string text = ss.str();
  CHECK(text.rfind("STAB2FACETS v1 k 3 count 16\n", 0) == 0);
  std::istringstream in(text);
  CHECK(read_facet_file(in) == facets);

  std::string broken = text;
  broken[broken.find('\n') + 1] = broken[broken.find('\n') + 1] == '0' ? '1' : '0';
  std::istringstream bad(broken);
  CHECK_THROWS_AS(read_facet_file(bad), ParseError);
}

TEST_CASE("shipped library files agree with enumeration") {
  for (int k = 2; k <= 5; ++k) {
    CAPTURE(k);
    CHECK(facet_library(k) == enumerate_facets(k));
  }
  CHECK(facet_library(5).size() == 368);
}

TEST_CASE("violated facets and deduplication") {
  const auto& lib = facet_library(3);
  // x_i = 0.6 with X_ij = 0 breaks x_1 + x_2 + x_3 - X_12 - X_13 - X_23 <= 1
  const Eigen::MatrixXd x = 0.6 * Eigen::MatrixXd::Identity(3, 3);
  const auto viol = violated_facets(x, lib, 1e-9);
  CHECK_FALSE(viol.empty());
  for (const int i : viol) CHECK(lib[static_cast<std::size_t>(i)].value(x) > lib[static_cast<std::size_t>(i)].rhs);

  // on an edge-free subgraph nothing collapses
  CHECK(dedup_facets(viol, lib, Graph::edgeless(3)) == viol);
  // with every pair adjacent only diagonal coefficients remain
  const auto dd = dedup_facets(viol, lib, Graph::complete(3));
  CHECK(dd.size() <= viol.size());
  for (std::size_t a = 0; a < dd.size(); ++a)
    for (std::size_t b = a + 1; b < dd.size(); ++b) {
      const auto& fa = lib[static_cast<std::size_t>(dd[a])];
      const auto& fb = lib[static_cast<std::size_t>(dd[b])];
      const bool same = fa.rhs == fb.rhs && fa.coeffs[0] == fb.coeffs[0] && fa.coeffs[3] == fb.coeffs[3] && fa.coeffs[5] == fb.coeffs[5];
      CHECK_FALSE(same);
    }
}
