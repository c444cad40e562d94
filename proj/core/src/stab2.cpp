#include "stabset/stab2.hpp"

#include "stabset/exact_enum.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#ifndef STABSET_DATA_DIR
#define STABSET_DATA_DIR ""
#endif

namespace stabset {

std::vector<StableSetMatrix> stable_set_matrices(const Graph& g) {
  const auto sets = stable_sets(g);
  std::vector<StableSetMatrix> out;
  out.reserve(sets.size());
  for (const auto mask : sets) {
    Eigen::VectorXd s(g.n());
    for (int i = 0; i < g.n(); ++i) s[i] = static_cast<double>((mask >> i) & 1U);
    out.push_back({s * s.transpose(), mask});
  }
  return out;
}

int triangle_index(int k, int i, int j) {
  if (i > j) std::swap(i, j);
  return i * k - i * (i - 1) / 2 + (j - i);
}

double Facet::value(const Eigen::MatrixXd& x) const {
  double s = 0.0;
  int t = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) s += static_cast<double>(coeffs[static_cast<std::size_t>(t++)]) * x(i, j);
  return s;
}

Eigen::MatrixXd Facet::matrix() const {
  Eigen::MatrixXd f(k, k);
  int t = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      const double c = static_cast<double>(coeffs[static_cast<std::size_t>(t++)]);
      if (i == j) {
        f(i, i) = c;
      } else {
        f(i, j) = 0.5 * c;
        f(j, i) = 0.5 * c;
      }
    }
  return f;
}

namespace {

using i128 = __int128;
using Ray = std::vector<std::int64_t>;

struct DdRay {
  Ray u;                 // (beta, alpha): beta + alpha . v_s >= 0 for all processed s
  std::uint64_t zeros;   // processed rows where the ray is tight
};

std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("enumerate_facets: coefficient overflow");
  return static_cast<std::int64_t>(v);
}

void make_primitive(Ray& u) {
  std::int64_t g = 0;
  for (const auto c : u) g = std::gcd(g, c < 0 ? -c : c);
  if (g > 1)
    for (auto& c : u) c /= g;
}

// Row (1, v_s) of the homogenized point s s^T.
std::vector<std::int64_t> point_row(int k, std::uint64_t s) {
  std::vector<std::int64_t> row(static_cast<std::size_t>(triangle_size(k)) + 1, 0);
  row[0] = 1;
  int t = 1;
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j, ++t) row[static_cast<std::size_t>(t)] = ((s >> i) & (s >> j) & 1U) ? 1 : 0;
  return row;
}

i128 dot(const std::vector<std::int64_t>& a, const Ray& u) {
  i128 s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<i128>(a[i]) * u[i];
  return s;
}

// Rows 0, singletons and pairs form a triangular basis of the homogenized space.
std::vector<std::uint64_t> basis_rows(int k) {
  std::vector<std::uint64_t> rows{0};
  for (int i = 0; i < k; ++i) rows.push_back(std::uint64_t{1} << i);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) rows.push_back((std::uint64_t{1} << i) | (std::uint64_t{1} << j));
  return rows;
}

// Extreme rays of {u : A_B u >= 0}: the columns of A_B^{-1}, scaled to integers.
std::vector<DdRay> initial_rays(int k, const std::vector<std::uint64_t>& basis) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  const int dim = triangle_size(k) + 1;
  std::vector<std::vector<cpp_rational>> a(static_cast<std::size_t>(dim), std::vector<cpp_rational>(static_cast<std::size_t>(2 * dim)));
  for (int r = 0; r < dim; ++r) {
    const auto row = point_row(k, basis[static_cast<std::size_t>(r)]);
    for (int c = 0; c < dim; ++c) a[r][c] = row[static_cast<std::size_t>(c)];
    a[r][dim + r] = 1;
  }
  for (int c = 0; c < dim; ++c) {
    int piv = c;
    while (a[piv][c] == 0) ++piv;
    std::swap(a[piv], a[c]);
    const cpp_rational inv = 1 / a[c][c];
    for (auto& x : a[c]) x *= inv;
    for (int r = 0; r < dim; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const cpp_rational f = a[r][c];
      for (int cc = 0; cc < 2 * dim; ++cc) a[r][cc] -= f * a[c][cc];
    }
  }
  std::uint64_t all = 0;
  for (const auto s : basis) all |= std::uint64_t{1} << s;
  std::vector<DdRay> rays;
  for (int j = 0; j < dim; ++j) {
    cpp_int lcm = 1;
    for (int r = 0; r < dim; ++r) {
      const cpp_int den = boost::multiprecision::denominator(a[r][dim + j]);
      lcm = lcm / boost::multiprecision::gcd(lcm, den) * den;
    }
    Ray u(static_cast<std::size_t>(dim));
    for (int r = 0; r < dim; ++r) {
      const cpp_rational v = a[r][dim + j] * lcm;
      u[static_cast<std::size_t>(r)] = static_cast<std::int64_t>(boost::multiprecision::numerator(v));
    }
    make_primitive(u);
    rays.push_back({std::move(u), all & ~(std::uint64_t{1} << basis[static_cast<std::size_t>(j)])});
  }
  return rays;
}

void save_state(const std::filesystem::path& path, int k, std::size_t next, const std::vector<DdRay>& rays) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    out << "STAB2DD v1 k " << k << " next " << next << " rays " << rays.size() << '\n';
    for (const auto& r : rays) {
      out << r.zeros;
      for (const auto c : r.u) out << ' ' << c;
      out << '\n';
    }
    if (!out) throw std::runtime_error("enumerate_facets: cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

bool load_state(const std::filesystem::path& path, int k, std::size_t& next, std::vector<DdRay>& rays) {
  std::ifstream in(path);
  if (!in) return false;
  std::string magic, ver, kw, nw, rw;
  int kk = 0;
  std::size_t count = 0;
  in >> magic >> ver >> kw >> kk >> nw >> next >> rw >> count;
  if (!in || magic != "STAB2DD" || ver != "v1" || kk != k) throw ParseError(1, "bad enumeration state header");
  const int dim = triangle_size(k) + 1;
  rays.assign(count, {});
  for (std::size_t i = 0; i < count; ++i) {
    rays[i].u.resize(static_cast<std::size_t>(dim));
    in >> rays[i].zeros;
    for (auto& c : rays[i].u) in >> c;
    if (!in) throw ParseError(i + 2, "truncated enumeration state");
  }
  return true;
}

}  // namespace

std::vector<Facet> enumerate_facets(int k, const EnumerationOptions& options) {
  if (k < kMinFacetOrder || k > kMaxFacetOrder)
    throw std::invalid_argument("enumerate_facets: order must be in [2, 6], got " + std::to_string(k));
  const int dim = triangle_size(k) + 1;
  const auto basis = basis_rows(k);
  std::vector<std::uint64_t> order;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << k); ++s)
    if (std::find(basis.begin(), basis.end(), s) == basis.end()) order.push_back(s);
  std::stable_sort(order.begin(), order.end(), [](auto a, auto b) { return std::popcount(a) < std::popcount(b); });

  std::vector<DdRay> rays;
  std::size_t next = 0;
  if (!options.state_file || !load_state(*options.state_file, k, next, rays)) {
    rays = initial_rays(k, basis);
    next = 0;
  }

  for (; next < order.size(); ++next) {
    if (options.deadline && std::chrono::steady_clock::now() > *options.deadline) {
      if (options.state_file) save_state(*options.state_file, k, next, rays);
      throw BudgetExceeded("enumerate_facets: time budget exceeded for k = " + std::to_string(k));
    }
    const std::uint64_t s = order[next];
    const std::uint64_t bit = std::uint64_t{1} << s;
    const auto row = point_row(k, s);
    std::vector<i128> val(rays.size());
    std::vector<std::size_t> pos, neg;
    std::vector<DdRay> kept;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      val[i] = dot(row, rays[i].u);
      if (val[i] > 0) pos.push_back(i);
      else if (val[i] < 0) neg.push_back(i);
    }
    for (std::size_t i = 0; i < rays.size(); ++i) {
      if (val[i] >= 0) {
        kept.push_back(rays[i]);
        if (val[i] == 0) kept.back().zeros |= bit;
      }
    }
    for (const auto p : pos) {
      for (const auto q : neg) {
        const std::uint64_t common = rays[p].zeros & rays[q].zeros;
        if (std::popcount(common) < dim - 2) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r)
          if (r != p && r != q && (rays[r].zeros & common) == common) adjacent = false;
        if (!adjacent) continue;
        Ray u(static_cast<std::size_t>(dim));
        for (int c = 0; c < dim; ++c)
          u[static_cast<std::size_t>(c)] = narrow(val[p] * rays[q].u[static_cast<std::size_t>(c)] - val[q] * rays[p].u[static_cast<std::size_t>(c)]);
        make_primitive(u);
        kept.push_back({std::move(u), common | bit});
      }
    }
    rays = std::move(kept);
  }

  std::vector<Facet> facets;
  facets.reserve(rays.size());
  for (const auto& r : rays) {
    Facet f;
    f.k = k;
    f.rhs = r.u[0];
    f.coeffs.resize(static_cast<std::size_t>(dim - 1));
    for (int c = 1; c < dim; ++c) f.coeffs[static_cast<std::size_t>(c - 1)] = -r.u[static_cast<std::size_t>(c)];
    facets.push_back(std::move(f));
  }
  std::sort(facets.begin(), facets.end());
  if (options.state_file) std::filesystem::remove(*options.state_file);
  return facets;
}

namespace {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string facet_body(int k, const std::vector<Facet>& facets) {
  std::ostringstream body;
  body << "STAB2FACETS v1 k " << k << " count " << facets.size() << '\n';
  for (const auto& f : facets) {
    for (const auto c : f.coeffs) body << c << ' ';
    body << f.rhs << '\n';
  }
  return body.str();
}

}  // namespace

void write_facet_file(std::ostream& out, int k, const std::vector<Facet>& facets) {
  const std::string body = facet_body(k, facets);
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(body)));
  out << body << "checksum " << hex << '\n';
}

std::vector<Facet> read_facet_file(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "empty facet file");
  std::istringstream head(line);
  std::string magic, ver, kw, cw;
  int k = 0;
  std::size_t count = 0;
  head >> magic >> ver >> kw >> k >> cw >> count;
  if (!head || magic != "STAB2FACETS" || ver != "v1" || kw != "k" || cw != "count" || k < kMinFacetOrder || k > kMaxFacetOrder)
    throw ParseError(1, "malformed facet file header");
  const int d = triangle_size(k);
  std::vector<Facet> facets;
  facets.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw ParseError(i + 2, "missing facet line");
    std::istringstream ls(line);
    Facet f;
    f.k = k;
    f.coeffs.resize(static_cast<std::size_t>(d));
    for (auto& c : f.coeffs) ls >> c;
    ls >> f.rhs;
    std::string extra;
    if (!ls || (ls >> extra)) throw ParseError(i + 2, "facet line needs " + std::to_string(d + 1) + " integers");
    facets.push_back(std::move(f));
  }
  if (!std::getline(in, line)) throw ParseError(count + 2, "missing checksum line");
  std::istringstream cs(line);
  std::string word, hex;
  cs >> word >> hex;
  if (word != "checksum") throw ParseError(count + 2, "missing checksum line");
  const std::uint64_t expect = std::strtoull(hex.c_str(), nullptr, 16);
  if (fnv1a(facet_body(k, facets)) != expect || hex.size() != 16) throw ParseError(count + 2, "checksum mismatch");
  return facets;
}

std::filesystem::path facet_directory() {
  if (const char* env = std::getenv("STABSET_FACET_DIR"); env && *env) return env;
  return STABSET_DATA_DIR;
}

std::string facet_file_name(int k) { return "stab2_k" + std::to_string(k) + ".txt"; }

const std::vector<Facet>& facet_library(int k) {
  if (k < kMinFacetOrder || k > kMaxFacetOrder)
    throw std::invalid_argument("facet library supports orders 2.." + std::to_string(kMaxFacetOrder) + ", got " +
                                std::to_string(k));
  static std::mutex mu;
  static std::map<int, std::vector<Facet>> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(k); it != cache.end()) return it->second;
  std::vector<Facet> facets;
  const auto path = facet_directory() / facet_file_name(k);
  if (std::ifstream in(path); in) {
    facets = read_facet_file(in);
    if (facets.empty() || facets.front().k != k) throw ParseError(1, path.string() + ": wrong order");
  } else if (k <= 5) {
    facets = enumerate_facets(k);
  } else {
    throw std::runtime_error("facet library for k = 6 not found at " + path.string() +
                             "; generate it with `stabset facets --k 6`");
  }
  return cache.emplace(k, std::move(facets)).first->second;
}

std::vector<int> violated_facets(const Eigen::MatrixXd& xsub, const std::vector<Facet>& facets, double eps) {
  std::vector<int> out;
  for (std::size_t i = 0; i < facets.size(); ++i)
    if (facets[i].value(xsub) > static_cast<double>(facets[i].rhs) + eps) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> dedup_facets(const std::vector<int>& candidates, const std::vector<Facet>& facets, const Graph& g_sub) {
  std::vector<int> masked;
  for (const auto& [i, j] : g_sub.edges()) masked.push_back(triangle_index(g_sub.n(), i, j));
  std::map<std::pair<std::vector<std::int64_t>, std::int64_t>, int> seen;
  std::vector<int> sorted = candidates;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> out;
  for (const int idx : sorted) {
    auto key = std::make_pair(facets[static_cast<std::size_t>(idx)].coeffs, facets[static_cast<std::size_t>(idx)].rhs);
    for (const int t : masked) key.first[static_cast<std::size_t>(t)] = 0;
    if (seen.emplace(std::move(key), idx).second) out.push_back(idx);
  }
  return out;
}

}  // namespace stabset
