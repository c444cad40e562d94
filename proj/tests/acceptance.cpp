// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   stabset_acceptance [--only N[,N...]] [--k6] [--cli PATH]
//
// --k6 adds the order-6 facet count to criterion 1 (several minutes).
// --cli runs criterion 9 through the command-line tool instead of the library.

#include "oracles.hpp"
#include "stabset/bnb.hpp"
#include "stabset/esc.hpp"
#include "stabset/exact_enum.hpp"
#include "stabset/stab2.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace stabset;

namespace {

// Tolerances and budgets.
constexpr double kFacetMinutes = 10.0;
constexpr double kThetaTol = 1e-6;
constexpr double kCycleTol = 1e-5;
constexpr double kSandwichSlack = 2e-5;
constexpr double kFwGapTol = 1e-7;
constexpr double kIdentityTol = 1e-8;
constexpr double kHyperplaneValidityTol = 1e-12;
constexpr double kLemma3Tol = 4e-5;
constexpr double kExactSuiteMinutes = 30.0;
constexpr int kExactLeafSize = 12;
constexpr double kNodeSlack = 1.10;
constexpr double kPostSolveDistance = 1e-5;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct Options {
  std::set<int> only;
  bool k6 = false;
  std::string cli;
};

Outcome facets(const Options& opt) {
  const auto t0 = Clock::now();
  const auto f5 = enumerate_facets(5);
  const double secs = since(t0);
  bool ok = f5.size() == 368 && secs <= kFacetMinutes * 60.0;
  std::string d = "k=5: " + std::to_string(f5.size()) + " facets in " + fmt("%.1f", secs * 1e3) + " ms";
  for (int k = 2; k <= 4; ++k) {
    const bool same = enumerate_facets(k) == oracle::hull_facets(k);
    ok = ok && same;
    d += "; k=" + std::to_string(k) + (same ? " matches oracle" : " DIFFERS from oracle");
  }
  if (opt.k6) {
    const auto t6 = Clock::now();
    const auto f6 = enumerate_facets(6);
    ok = ok && f6.size() == 116764;
    d += "; k=6: " + std::to_string(f6.size()) + " facets in " + fmt("%.0f", since(t6)) + " s";
  }
  return {ok, d};
}

Outcome theta_values() {
  const auto t0 = Clock::now();
  double worst_named = 0.0, worst_cycle = 0.0;
  for (const int n : {1, 5, 10, 20}) {
    worst_named = std::max(worst_named, std::abs(theta(Graph::edgeless(n)).value - n));
    worst_named = std::max(worst_named, std::abs(theta(Graph::complete(n)).value - 1.0));
  }
  for (const int n : {5, 7, 9, 11})
    worst_cycle = std::max(worst_cycle, std::abs(theta(Graph::cycle(n)).value - oracle::theta_odd_cycle(n)));
  return {worst_named <= kThetaTol && worst_cycle <= kCycleTol,
          "max error K_n/edgeless " + fmt("%.2e", worst_named) + ", odd cycles " + fmt("%.2e", worst_cycle) + " (" +
              fmt("%.2f", since(t0)) + " s)"};
}

Outcome sandwich() {
  int graphs = 0, violations = 0, monotone_fail = 0;
  double worst = 0.0;
  for (const double p : {0.2, 0.5, 0.8}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const int n = 20 + 2 * static_cast<int>(seed);
      const auto g = erdos_renyi(n, p, seed);
      const int alpha = oracle::clique_alpha(g);
      const auto th = theta(g);
      const int q = n / 2;
      const auto J = random_esc_set(g, th.X, q, kDefaultSubgraphOrder, seed);
      const double zc = bound_fixed_escs(g, BoundMode::CH, J, th.X).value;
      const double zf = bound_fixed_escs(g, BoundMode::VF, J, th.X).value;
      const double zh = bound_fixed_escs(g, BoundMode::SH, J, th.X).value;
      // J_q is ranked, so its prefixes are nested and z^C can only grow as it shrinks
      const std::vector<VertexSet> half(J.begin(), J.begin() + static_cast<std::ptrdiff_t>(J.size() / 2));
      const double zc_half = bound_fixed_escs(g, BoundMode::CH, half, th.X).value;
      const double chain[] = {alpha - zc, zc - zf, zf - th.value, zc - zh, zh - th.value};
      for (const double gap : chain) {
        worst = std::max(worst, gap);
        violations += gap > kSandwichSlack;
      }
      monotone_fail += zc - zc_half > kSandwichSlack;
      ++graphs;
    }
  }
  return {violations == 0 && monotone_fail == 0,
          std::to_string(graphs) + " graphs, " + std::to_string(violations) + " order violations (largest excess " +
              fmt("%.1e", worst) + "), " + std::to_string(monotone_fail) + " monotonicity failures"};
}

Eigen::MatrixXd random_symmetric(int k, std::mt19937_64& rng, const std::vector<StableSetMatrix>& mats) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(k, k);
  double total = 0.0;
  for (const auto& s : mats) {
    const double w = u(rng);
    x += w * s.entries;
    total += w;
  }
  x /= total;
  const double noise = u(rng) < 0.2 ? 1.5 : 0.3;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b <= a; ++b) {
      const double e = noise * (2.0 * u(rng) - 1.0);
      x(a, b) += e;
      if (a != b) x(b, a) += e;
    }
  return x;
}

Outcome projections() {
  std::mt19937_64 rng(2024);
  int bad_gap = 0, bad_valid = 0, bad_identity = 0, cuts = 0;
  double worst_gap = 0.0, worst_identity = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 2 + trial % 5;
    const auto g = erdos_renyi(k, std::uniform_real_distribution<double>(0.0, 0.7)(rng), rng());
    const auto mats = stable_set_matrices(g);
    const Eigen::MatrixXd x = random_symmetric(k, rng, mats);
    const auto p = project_to_stab2(x, mats);
    worst_gap = std::max(worst_gap, p.fw_gap);
    bad_gap += p.fw_gap > kFwGapTol;
    const auto cut = separating_hyperplane(x, p, mats);
    if (!cut) continue;
    ++cuts;
    for (const auto& s : mats)
      if ((cut->H.cwiseProduct(s.entries)).sum() > cut->h + kHyperplaneValidityTol) {
        ++bad_valid;
        break;
      }
    const double id = std::abs((cut->H.cwiseProduct(x)).sum() - cut->h - p.distance);
    worst_identity = std::max(worst_identity, id);
    bad_identity += id > kIdentityTol;
  }
  return {bad_gap == 0 && bad_valid == 0 && bad_identity == 0,
          "1000 projections, max FW gap " + fmt("%.1e", worst_gap) + "; " + std::to_string(cuts) +
              " hyperplanes, " + std::to_string(bad_valid) + " invalid, max identity error " + fmt("%.1e", worst_identity)};
}

Outcome lemma3() {
  std::mt19937_64 rng(33);
  double worst = 0.0;
  int nontrivial = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 10 + trial % 8;
    const auto g = erdos_renyi(n, 0.25 + 0.02 * (trial % 10), rng());
    const int k = 2 + trial % 3;
    // the most violated k-subgraph of the theta solution, so the ESC matters
    const auto th = theta(g);
    SearchParams sp;
    sp.order = k;
    const auto cands = find_violated_subgraphs(th.X, g, rng(), sp);
    VertexSet I;
    if (!cands.empty()) {
      I = cands.front().subset;
    } else {
      std::vector<Vertex> all(static_cast<std::size_t>(n));
      for (int v = 0; v < n; ++v) all[static_cast<std::size_t>(v)] = v;
      std::shuffle(all.begin(), all.end(), rng);
      std::vector<Vertex> pick(all.begin(), all.begin() + k);
      std::sort(pick.begin(), pick.end());
      I = VertexSet(pick, n);
    }

    auto facets = theta_model(g);
    for (const auto& f : facet_library(k)) add_facet_cut(facets, g, I, f);
    auto hull = theta_model(g);
    build_ch_constraints(hull, g, I);
    const double zf = sdp::solve(facets).objective_value;
    const double zc = sdp::solve(hull).objective_value;
    nontrivial += th.value - zc > 1e-4;
    worst = std::max(worst, std::abs(zf - zc));
  }
  return {worst <= kLemma3Tol, "20 subgraphs (" + std::to_string(nontrivial) + " lower theta by > 1e-4), max |z_facets - z_hull| " +
                                   fmt("%.1e", worst)};
}

Outcome exactness() {
  const auto t0 = Clock::now();
  int runs = 0, wrong = 0;
  std::int64_t nodes = 0;
  const double ps[] = {0.15, 0.25, 0.35, 0.5};
  for (int i = 0; i < 150; ++i) {
    const int n = 20 + i % 11;
    const auto g = erdos_renyi(n, ps[i % 4], static_cast<std::uint64_t>(i));
    const int alpha = alpha_exact(g, n).alpha;
    if (alpha != oracle::clique_alpha(g)) ++wrong;
    for (const auto mode : {BoundMode::TH, BoundMode::CH, BoundMode::VF, BoundMode::SH}) {
      bnb::Config cfg;
      cfg.mode = mode;
      cfg.time_limit_s = std::nullopt;
      // small leaves so the bounds and branching do the work, not enumeration
      cfg.leaf_size = kExactLeafSize;
      const auto r = bnb::solve(g, cfg);
      nodes += r.nodes;
      const bool ok = r.optimal && r.lower_bound == alpha && r.upper_bound == alpha &&
                      static_cast<int>(r.witness.size()) == alpha && g.is_stable(r.witness);
      wrong += !ok;
      ++runs;
    }
  }
  const double secs = since(t0);
  return {wrong == 0 && secs <= kExactSuiteMinutes * 60.0,
          std::to_string(runs) + " solves, " + std::to_string(wrong) + " wrong, " + std::to_string(nodes) + " nodes, " +
              fmt("%.0f", secs) + " s"};
}

Outcome node_order() {
  double th = 0.0, sh = 0.0, vf = 0.0;
  int count = 0;
  for (const double p : {0.15, 0.2, 0.25}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto g = erdos_renyi(60, p, seed);
      auto nodes = [&](BoundMode m) {
        bnb::Config cfg;
        cfg.mode = m;
        cfg.time_limit_s = std::nullopt;
        return static_cast<double>(bnb::solve(g, cfg).nodes);
      };
      th += nodes(BoundMode::TH);
      sh += nodes(BoundMode::SH);
      vf += nodes(BoundMode::VF);
      ++count;
    }
  }
  th /= count;
  sh /= count;
  vf /= count;
  return {vf <= kNodeSlack * sh && sh <= kNodeSlack * th,
          std::to_string(count) + " instances G(60,p): mean nodes VF " + fmt("%.2f", vf) + ", SH " + fmt("%.2f", sh) +
              ", TH " + fmt("%.2f", th)};
}

Outcome post_solve() {
  const auto g = erdos_renyi(60, 0.25, 1);
  const auto th = theta(g);
  const auto J = random_esc_set(g, th.X, 20, kDefaultSubgraphOrder, 1);
  const auto ch = bound_fixed_escs(g, BoundMode::CH, J, th.X);
  const auto vf = bound_fixed_escs(g, BoundMode::VF, J, th.X);
  const double d_before = mean_projection_distance(g, th.X, J);
  const double d_after = mean_projection_distance(g, ch.X, J);
  const double v_before = mean_violated_facets(g, th.X, J, kFacetEps);
  const double v_after = mean_violated_facets(g, vf.X, J, kFacetEps);
  return {J.size() >= 20 && d_after <= kPostSolveDistance && v_after < v_before,
          "|J| = " + std::to_string(J.size()) + ", CH distance " + fmt("%.2e", d_before) + " -> " + fmt("%.2e", d_after) +
              ", VF violated facets " + fmt("%.2f", v_before) + " -> " + fmt("%.2f", v_after)};
}

void strip_timing(nlohmann::json& j) {
  if (j.is_object()) {
    j.erase("time_s");
    for (auto& [key, v] : j.items()) strip_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip_timing(v);
  }
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism(const Options& opt) {
  const auto g = erdos_renyi(50, 0.2, 5);
  std::string a, b;
  if (!opt.cli.empty()) {
    const auto dir = std::filesystem::temp_directory_path();
    const auto inst = dir / "stabset_acceptance_g50.clq";
    std::ofstream(inst, std::ios::binary) << serialize_dimacs(g, "determinism");
    for (int run = 0; run < 2; ++run) {
      const auto out = dir / ("stabset_acceptance_run" + std::to_string(run) + ".json");
      const std::string cmd = "\"" + opt.cli + "\" solve \"" + inst.string() + "\" --bound sh --per-node --seed 3 --out \"" +
                              out.string() + "\"";
      if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
      auto j = nlohmann::json::parse(slurp(out));
      strip_timing(j);
      (run == 0 ? a : b) = j.dump(2);
    }
  } else {
    for (int run = 0; run < 2; ++run) {
      bnb::Config cfg;
      cfg.mode = BoundMode::SH;
      cfg.seed = 3;
      cfg.record_nodes = true;
      auto j = bnb::to_json(bnb::solve(g, cfg), cfg, "g50");
      strip_timing(j);
      (run == 0 ? a : b) = j.dump(2);
    }
  }
  return {a == b && !a.empty(), std::string(opt.cli.empty() ? "library" : "cli") + " reports " +
                                    (a == b ? "identical" : "DIFFER") + " (" + std::to_string(a.size()) + " bytes)"};
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--k6") {
      opt.k6 = true;
    } else if (arg == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string t; std::getline(ss, t, ',');) opt.only.insert(std::stoi(t));
    } else if (arg == "--cli" && i + 1 < argc) {
      opt.cli = argv[++i];
    } else {
      std::cerr << "usage: stabset_acceptance [--only N[,N...]] [--k6] [--cli PATH]\n";
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"facet enumeration", [&] { return facets(opt); }},
      {"theta values", theta_values},
      {"sandwich ordering", sandwich},
      {"projection and hyperplanes", projections},
      {"facets vs convex hull ESC", lemma3},
      {"branch and bound exactness", exactness},
      {"node count ordering", node_order},
      {"post-solve ESC satisfaction", post_solve},
      {"determinism", [&] { return determinism(opt); }},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!opt.only.empty() && !opt.only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << ". " << criteria[i].first << ": " << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
