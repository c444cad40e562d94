#include <CLI11.hpp>

#include "stabset/bnb.hpp"
#include "stabset/esc.hpp"
#include "stabset/graph.hpp"
#include "stabset/stab2.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace stabset;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitTimeout = 2;

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << text;
}

sdp::Method parse_method(const std::string& s) {
  if (s == "ipm") return sdp::Method::interior_point;
  if (s == "admm") return sdp::Method::admm;
  throw std::invalid_argument("unknown sdp method '" + s + "' (expected ipm or admm)");
}

struct SolveArgs {
  std::string instance;
  std::string bound = "th";
  double time_limit = 14400.0;
  std::uint64_t seed = 0;
  int leaf_size = kDefaultLeafSize;
  double eps_facet = kFacetEps;
  int order = kDefaultSubgraphOrder;
  int max_cycles = 20;
  std::string out;
  int parallel = 1;
  bool per_node = false;
  bool no_isolated = false;
  std::string sdp_method = "ipm";
  double sdp_tol = 1e-7;
};

int run_solve(const SolveArgs& a) {
  const Graph g = read_dimacs_file(a.instance);
  bnb::Config cfg;
  cfg.mode = parse_bound_mode(a.bound);
  cfg.time_limit_s = a.time_limit;
  cfg.seed = a.seed;
  cfg.leaf_size = a.leaf_size;
  cfg.eps_facet = a.eps_facet;
  cfg.subgraph_order = a.order;
  cfg.max_cycles = a.max_cycles;
  cfg.threads = a.parallel;
  cfg.record_nodes = a.per_node;
  cfg.fix_isolated = !a.no_isolated;
  cfg.sdp.method = parse_method(a.sdp_method);
  cfg.sdp.tol = a.sdp_tol;
  const auto res = bnb::solve(g, cfg);
  const auto name = std::filesystem::path(a.instance).filename().string();
  emit(bnb::to_json(res, cfg, name).dump(2) + "\n", a.out);
  return res.optimal ? kExitOk : kExitTimeout;
}

struct BoundArgs {
  std::string instance;
  std::string bound = "th";
  std::vector<int> num_escs{0};
  std::uint64_t seed = 0;
  int order = kDefaultSubgraphOrder;
  double eps_facet = kFacetEps;
  std::string format = "json";
  std::string out;
  bool loop = false;
  int max_cycles = 20;
  std::string sdp_method = "ipm";
  double sdp_tol = 1e-7;
};

int run_bound(const BoundArgs& a) {
  const Graph g = read_dimacs_file(a.instance);
  const BoundMode mode = parse_bound_mode(a.bound);
  BoundParams params;
  params.order = a.order;
  params.eps_facet = a.eps_facet;
  params.seed = a.seed;
  params.max_cycles = a.max_cycles;
  params.sdp.method = parse_method(a.sdp_method);
  params.sdp.tol = a.sdp_tol;
  if (mode == BoundMode::VF && (a.order < kMinFacetOrder || a.order > kMaxFacetOrder))
    throw std::invalid_argument("facet library supports k <= 6");
  const auto name = std::filesystem::path(a.instance).filename().string();

  if (a.loop) {
    const auto rep = bound_with_escs(g, mode, params);
    auto j = to_json(rep);
    j["instance"] = name;
    emit(j.dump(2) + "\n", a.out);
    return kExitOk;
  }

  // fixed-J protocol: X* from theta, J_q chosen among 3q random subsets
  const auto base = theta(g, params.sdp);
  nlohmann::json rows = nlohmann::json::array();
  std::ostringstream csv;
  csv << "instance,mode,q,value,time_s,dist_before,dist_after,viol_before,viol_after\n";
  for (const int q : a.num_escs) {
    const auto J = random_esc_set(g, base.X, q, a.order, a.seed);
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = mode == BoundMode::TH ? base : bound_fixed_escs(g, mode, J, base.X, params);
    const double secs = mode == BoundMode::TH ? base.history.front().seconds
                                              : std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double d0 = mean_projection_distance(g, base.X, J);
    const double d1 = mean_projection_distance(g, rep.X, J);
    const bool facets = a.order >= kMinFacetOrder && a.order <= kMaxFacetOrder;
    const double v0 = facets ? mean_violated_facets(g, base.X, J, a.eps_facet) : 0.0;
    const double v1 = facets ? mean_violated_facets(g, rep.X, J, a.eps_facet) : 0.0;
    rows.push_back({{"q", static_cast<int>(J.size())},
                    {"value", rep.value},
                    {"objective", rep.objective},
                    {"time_s", secs},
                    {"dist_before", d0},
                    {"dist_after", d1},
                    {"viol_before", v0},
                    {"viol_after", v1},
                    {"stats", to_json(rep.stats)}});
    csv << name << ',' << to_string(mode) << ',' << J.size() << ',' << rep.value << ',' << secs << ',' << d0 << ',' << d1
        << ',' << v0 << ',' << v1 << '\n';
  }
  if (a.format == "csv") {
    emit(csv.str(), a.out);
  } else {
    nlohmann::json j{{"instance", name}, {"mode", std::string(to_string(mode))}, {"theta", base.value}, {"rows", rows}};
    emit(j.dump(2) + "\n", a.out);
  }
  return kExitOk;
}

struct FacetArgs {
  int k = 5;
  std::string out;
  double time_limit = 0.0;
  std::string state;
};

int run_facets(const FacetArgs& a) {
  EnumerationOptions opts;
  if (a.time_limit > 0)
    opts.deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(a.time_limit));
  if (!a.state.empty()) opts.state_file = a.state;
  std::vector<Facet> facets;
  try {
    facets = enumerate_facets(a.k, opts);
  } catch (const BudgetExceeded& e) {
    std::cerr << e.what() << (a.state.empty() ? "" : "; state saved to " + a.state) << '\n';
    return kExitTimeout;
  }
  const std::string out = a.out.empty() ? (facet_directory() / facet_file_name(a.k)).string() : a.out;
  {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + out);
    write_facet_file(f, a.k, facets);
  }
  std::ifstream check(out, std::ios::binary);
  const auto back = read_facet_file(check);
  if (back != facets) throw std::runtime_error("facet file did not read back identically");
  std::cout << "k " << a.k << " count " << facets.size() << " -> " << out << '\n';
  return kExitOk;
}

struct GenerateArgs {
  int n = 0;
  double p = 0.5;
  std::uint64_t seed = 0;
  std::string out;
};

int run_generate(const GenerateArgs& a) {
  const Graph g = erdos_renyi(a.n, a.p, a.seed);
  std::ostringstream c;
  c << "G(" << a.n << "," << a.p << ") seed " << a.seed;
  emit(serialize_dimacs(g, c.str()), a.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact maximum stable set solver (Lovasz theta with exact subgraph constraints)"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Compute alpha(G) by branch and bound");
  solve->add_option("instance", sa.instance, "DIMACS graph file")->required();
  solve->add_option("--bound", sa.bound, "Bound at each node: th, ch, vf or sh")->capture_default_str();
  solve->add_option("--time-limit", sa.time_limit, "Seconds")->capture_default_str();
  solve->add_option("--seed", sa.seed)->capture_default_str();
  solve->add_option("--leaf-size", sa.leaf_size, "Enumerate nodes with at most this many vertices")->capture_default_str();
  solve->add_option("--eps-facet", sa.eps_facet, "Facet violation threshold")->capture_default_str();
  solve->add_option("--subgraph-order", sa.order, "Order k of the exact subgraph constraints")->capture_default_str();
  solve->add_option("--max-cycles", sa.max_cycles, "Cutting-plane cycles per node")->capture_default_str();
  solve->add_option("--out", sa.out, "Report path (default stdout)");
  solve->add_option("--parallel", sa.parallel, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  solve->add_flag("--per-node", sa.per_node, "Include per-node summaries");
  solve->add_flag("--no-isolated-fixing", sa.no_isolated, "Do not fix isolated vertices before bounding");
  solve->add_option("--sdp-method", sa.sdp_method, "ipm or admm")->capture_default_str();
  solve->add_option("--sdp-tol", sa.sdp_tol)->capture_default_str();

  BoundArgs ba;
  auto* bound = app.add_subcommand("bound", "Upper bounds with exact subgraph constraints");
  bound->add_option("instance", ba.instance, "DIMACS graph file")->required();
  bound->add_option("--bound", ba.bound, "th, ch, vf or sh")->capture_default_str();
  bound->add_option("--num-escs", ba.num_escs, "Sizes q of the ESC sets J_q")->delimiter(',')->capture_default_str();
  bound->add_option("--seed", ba.seed)->capture_default_str();
  bound->add_option("--subgraph-order", ba.order)->capture_default_str();
  bound->add_option("--eps-facet", ba.eps_facet)->capture_default_str();
  bound->add_option("--format", ba.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  bound->add_option("--out", ba.out, "Report path (default stdout)");
  bound->add_flag("--loop", ba.loop, "Run the cutting-plane loop instead of a fixed J");
  bound->add_option("--max-cycles", ba.max_cycles)->capture_default_str();
  bound->add_option("--sdp-method", ba.sdp_method, "ipm or admm")->capture_default_str();
  bound->add_option("--sdp-tol", ba.sdp_tol)->capture_default_str();

  FacetArgs fa;
  auto* facets = app.add_subcommand("facets", "Enumerate the facets of STAB2 of the edgeless graph");
  facets->add_option("--k", fa.k, "Order, 2..6")->required();
  facets->add_option("--out", fa.out, "Output file (default: facet directory)");
  facets->add_option("--time-limit", fa.time_limit, "Seconds; 0 means unlimited");
  facets->add_option("--state", fa.state, "Resumable state file");

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Write an Erdos-Renyi graph in DIMACS format");
  gen->add_option("--n", ga.n)->required()->check(CLI::NonNegativeNumber);
  gen->add_option("--p", ga.p)->required()->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", ga.seed)->capture_default_str();
  gen->add_option("--out", ga.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*solve) return run_solve(sa);
    if (*bound) return run_bound(ba);
    if (*facets) return run_facets(fa);
    if (*gen) return run_generate(ga);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
