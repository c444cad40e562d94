#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stabset/graph.hpp"

namespace stabset {

struct StableSetMatrix {
  Eigen::MatrixXd entries;  // s s^T
  std::uint64_t source = 0;  // bit i = s_i
};

/// One matrix per element of stable_sets(g), in the same order.
std::vector<StableSetMatrix> stable_set_matrices(const Graph& g);

/// Number of upper-triangle positions of a symmetric k x k matrix.
constexpr int triangle_size(int k) { return k * (k + 1) / 2; }
/// Row-major upper-triangle position of (i, j), i <= j.
int triangle_index(int k, int i, int j);

/// <F, X> <= f for all stable set matrices of the edgeless graph of order k.
/// `coeffs` holds the upper triangle row-major; an off-diagonal coefficient is
/// the sum of both symmetric entries of F, so <F, X> = sum coeffs * X(i,j).
struct Facet {
  int k = 0;
  std::vector<std::int64_t> coeffs;
  std::int64_t rhs = 0;

  double value(const Eigen::MatrixXd& x) const;
  /// Fully symmetric F (off-diagonal entries are coeffs / 2).
  Eigen::MatrixXd matrix() const;
  auto operator<=>(const Facet&) const = default;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnumerationOptions {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  /// When set, progress is saved here on deadline and resumed from here on start.
  std::optional<std::filesystem::path> state_file;
};

inline constexpr int kMinFacetOrder = 2;
inline constexpr int kMaxFacetOrder = 6;

/// Facets of conv{ s s^T : s in {0,1}^k } by double description in exact
/// integer arithmetic. Facets are primitive integer vectors, sorted.
/// Throws std::invalid_argument for k outside [2, 6], BudgetExceeded when the
/// deadline passes (state saved first if a state file was given).
std::vector<Facet> enumerate_facets(int k, const EnumerationOptions& options = {});

/// Library file: "STAB2FACETS v1 k <k> count <N>", one line per facet with the
/// coefficients and rhs, then "checksum <16 hex digits>" (FNV-1a 64 over all
/// preceding bytes).
void write_facet_file(std::ostream& out, int k, const std::vector<Facet>& facets);
/// Throws ParseError on malformed content or checksum mismatch.
std::vector<Facet> read_facet_file(std::istream& in);

/// Directory searched for stab2_k<k>.txt: $STABSET_FACET_DIR if set, else the
/// data directory fixed at build or install time.
std::filesystem::path facet_directory();
std::string facet_file_name(int k);

/// Cached, thread-safe access to the facets of order k. Reads the library
/// file when present; orders up to 5 fall back to enumeration, order 6 must
/// come from a file (generate it with `stabset facets --k 6`).
const std::vector<Facet>& facet_library(int k);

/// Indices i with <F_i, xsub> > f_i + eps.
std::vector<int> violated_facets(const Eigen::MatrixXd& xsub, const std::vector<Facet>& facets, double eps);

/// One representative (lowest index) per class of facets in `candidates` that
/// coincide once the coefficients at edge positions of g_sub are zeroed.
std::vector<int> dedup_facets(const std::vector<int>& candidates, const std::vector<Facet>& facets, const Graph& g_sub);

}  // namespace stabset
