#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

namespace stabset::sdp {

/// Entry of a symmetric matrix: row <= col, meaning M(row,col) = M(col,row) = value.
/// Inner products always use the full sum over all entries, so an off-diagonal
/// entry contributes 2 * value * Y(row,col).
struct SymEntry {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

struct NonnegTerm {
  int index = 0;
  double value = 0.0;
};

/// <block, Y> + sum value * w[index]  (= or <=) rhs
struct LinearConstraint {
  std::vector<SymEntry> block;
  std::vector<NonnegTerm> nonneg;
  double rhs = 0.0;
};

/// maximize <objective, Y> + nonneg_objective' w
/// s.t.     equalities, inequalities (<=), Y psd of order block_order, w >= 0.
struct SdpModel {
  int block_order = 0;
  std::vector<SymEntry> objective;
  std::vector<double> nonneg_objective;
  /// Upper bound on each w_i valid over the feasible set (infinity if unknown).
  std::vector<double> nonneg_caps;
  std::vector<LinearConstraint> equalities;
  std::vector<LinearConstraint> inequalities;
  /// Upper bound on trace(Y) valid over the feasible set.
  double trace_bound = std::numeric_limits<double>::infinity();

  int num_nonneg() const { return static_cast<int>(nonneg_caps.size()); }
  int add_nonneg(double cap, double objective_coef = 0.0);
  /// Throws std::invalid_argument if indices are out of range or data not finite.
  void validate() const;
};

double inner(const std::vector<SymEntry>& m, const Eigen::MatrixXd& y);
Eigen::MatrixXd dense(const std::vector<SymEntry>& m, int order);

/// cutoff: the solve stopped early on SolverOptions::cutoff.
enum class Status { optimal, max_iter, infeasible, cutoff };
std::string_view to_string(Status s);

struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
};

struct SdpSolution {
  Eigen::MatrixXd Y;
  Eigen::VectorXd w;
  double objective_value = 0.0;
  /// Multipliers of the maximization form: min b'y + d'z, z >= 0.
  Eigen::VectorXd eq_duals;
  Eigen::VectorXd ineq_duals;
  Status status = Status::max_iter;
  Residuals residuals;
  int iterations = 0;
};

enum class Method { interior_point, admm };

struct SolverOptions {
  Method method = Method::interior_point;
  double tol = 1e-7;
  /// Iteration cap for the ADMM.
  int max_iter = 100000;
  /// Iteration cap for the interior-point method.
  int ipm_max_iter = 120;
  double initial_penalty = 1.0;
  /// Anderson acceleration depth; 0 disables it.
  int anderson_memory = 10;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  /// Interior-point only. Stop once safe_upper_bound of the iterate is <= cutoff,
  /// or once the primal iterate is feasible with objective above cutoff and the
  /// relative gap is below cutoff_gap (the optimum cannot reach the cutoff).
  std::optional<double> cutoff;
  double cutoff_gap = 1e-3;
};

/// Solves with the selected method. interior_point is a primal-dual path
/// following method (HKM direction, Mehrotra corrector); admm is an
/// alternating-direction augmented Lagrangian method on the dual with one psd
/// eigendecomposition per iteration. Both stop when max(primal, dual, gap) <= tol,
/// all measured relative to the data norms.
SdpSolution solve(const SdpModel& model, const SolverOptions& options = {});

/// Upper bound on the model optimum valid for any dual iterate: inequality
/// multipliers are clipped at zero, then the dual slack is repaired using its
/// smallest eigenvalue times trace_bound and each negative nonneg reduced cost
/// times its cap.
double safe_upper_bound(const SdpSolution& sol, const SdpModel& model);

/// Debug dump: "SDPMODEL order <r> nonneg <p> eq <E> ineq <I>", then one line per
/// objective / constraint with "b i j v" block terms and "w k v" nonneg terms.
void write_model(std::ostream& out, const SdpModel& model);

}  // namespace stabset::sdp
