#include "sdp_internal.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace stabset::sdp {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

// svec layout: upper triangle stored column by column, off-diagonals scaled by sqrt(2)
inline int svec_index(int i, int j) { return j * (j + 1) / 2 + i; }

void smat(const Eigen::VectorXd& v, int r, Eigen::MatrixXd& m) {
  m.resize(r, r);
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < j; ++i) {
      const double x = v[svec_index(i, j)] / kSqrt2;
      m(i, j) = x;
      m(j, i) = x;
    }
    m(j, j) = v[svec_index(j, j)];
  }
}

void svec(const Eigen::MatrixXd& m, Eigen::Ref<Eigen::VectorXd> v) {
  const int r = static_cast<int>(m.rows());
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < j; ++i) v[svec_index(i, j)] = kSqrt2 * 0.5 * (m(i, j) + m(j, i));
    v[svec_index(j, j)] = m(j, j);
  }
}

// Coefficient of a symmetric entry in svec coordinates.
inline double svec_coef(const SymEntry& e) { return e.row == e.col ? e.value : kSqrt2 * e.value; }

class ConeProjector {
 public:
  explicit ConeProjector(int order) : order_(order), solver_(order) {}

  // Projects the psd block of `v` (in place) onto the psd cone.
  void project_block(Eigen::Ref<Eigen::VectorXd> v) {
    if (order_ == 0) return;
    smat(v, order_, work_);
    solver_.compute(work_, Eigen::ComputeEigenvectors);
    const auto& lam = solver_.eigenvalues();
    const auto& q = solver_.eigenvectors();
    int npos = 0;
    for (int i = 0; i < order_; ++i) npos += lam[i] > 0.0 ? 1 : 0;
    if (npos == 0) {
      work_.setZero();
    } else if (npos <= order_ / 2) {
      const int first = order_ - npos;
      Eigen::MatrixXd qs = q.rightCols(npos);
      for (int c = 0; c < npos; ++c) qs.col(c) *= std::sqrt(lam[first + c]);
      work_.noalias() = qs * qs.transpose();
    } else {
      // add back the negative part
      const int nneg = order_ - npos;
      Eigen::MatrixXd qs = q.leftCols(nneg);
      for (int c = 0; c < nneg; ++c) qs.col(c) *= std::sqrt(-lam[c]);
      work_.noalias() += qs * qs.transpose();
    }
    svec(work_, v);
  }

 private:
  int order_;
  Eigen::MatrixXd work_;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver_;
};

struct Layout {
  int order = 0;
  int nb = 0;  // psd block length in svec coordinates
  int p = 0;   // nonneg variables
  int q = 0;   // inequality slacks
  int total() const { return nb + p + q; }
};

double safe_norm(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.norm(); }

}  // namespace

int SdpModel::add_nonneg(double cap, double objective_coef) {
  nonneg_caps.push_back(cap);
  nonneg_objective.push_back(objective_coef);
  return static_cast<int>(nonneg_caps.size()) - 1;
}

void SdpModel::validate() const {
  if (block_order < 0) throw std::invalid_argument("SdpModel: negative block order");
  if (nonneg_objective.size() != nonneg_caps.size())
    throw std::invalid_argument("SdpModel: nonneg objective/caps size mismatch");
  auto check_block = [&](const std::vector<SymEntry>& b) {
    for (const auto& e : b) {
      if (e.row < 0 || e.col < e.row || e.col >= block_order)
        throw std::invalid_argument("SdpModel: entry (" + std::to_string(e.row) + "," + std::to_string(e.col) +
                                    ") outside upper triangle of order " + std::to_string(block_order));
      if (!std::isfinite(e.value)) throw std::invalid_argument("SdpModel: non-finite coefficient");
    }
  };
  auto check = [&](const LinearConstraint& c) {
    check_block(c.block);
    for (const auto& t : c.nonneg)
      if (t.index < 0 || t.index >= num_nonneg() || !std::isfinite(t.value))
        throw std::invalid_argument("SdpModel: bad nonneg term");
    if (!std::isfinite(c.rhs)) throw std::invalid_argument("SdpModel: non-finite right-hand side");
  };
  check_block(objective);
  for (const auto& c : equalities) check(c);
  for (const auto& c : inequalities) check(c);
}

double inner(const std::vector<SymEntry>& m, const Eigen::MatrixXd& y) {
  double s = 0.0;
  for (const auto& e : m) s += (e.row == e.col ? 1.0 : 2.0) * e.value * y(e.row, e.col);
  return s;
}

Eigen::MatrixXd dense(const std::vector<SymEntry>& m, int order) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(order, order);
  for (const auto& e : m) {
    d(e.row, e.col) += e.value;
    if (e.row != e.col) d(e.col, e.row) += e.value;
  }
  return d;
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::max_iter: return "max_iter";
    case Status::infeasible: return "infeasible";
    case Status::cutoff: return "cutoff";
  }
  return "unknown";
}

SdpSolution solve(const SdpModel& model, const SolverOptions& options) {
  model.validate();
  if (!(options.tol > 0.0)) throw std::invalid_argument("solve: tol must be positive");
  if (options.method == Method::interior_point) return detail::solve_interior_point(model, options);
  return detail::solve_admm(model, options);
}

namespace detail {

SdpSolution solve_admm(const SdpModel& model, const SolverOptions& options) {

  Layout lay;
  lay.order = model.block_order;
  lay.nb = lay.order * (lay.order + 1) / 2;
  lay.p = model.num_nonneg();
  lay.q = static_cast<int>(model.inequalities.size());
  const int ne = static_cast<int>(model.equalities.size());
  const int rows = ne + lay.q;
  const int cols = lay.total();

  // Assemble A, b and the minimization cost c = -objective; rows are then
  // scaled to unit norm.
  std::vector<Triplet> trips;
  Eigen::VectorXd b(rows), row_scale(rows);
  auto add_row = [&](int r, const LinearConstraint& c, bool slack) {
    for (const auto& e : c.block) trips.emplace_back(r, svec_index(e.row, e.col), svec_coef(e));
    for (const auto& t : c.nonneg) trips.emplace_back(r, lay.nb + t.index, t.value);
    if (slack) trips.emplace_back(r, lay.nb + lay.p + (r - ne), 1.0);
    b[r] = c.rhs;
  };
  for (int r = 0; r < ne; ++r) add_row(r, model.equalities[static_cast<std::size_t>(r)], false);
  for (int r = 0; r < lay.q; ++r) add_row(ne + r, model.inequalities[static_cast<std::size_t>(r)], true);
  SpMat A(rows, cols);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  for (int r = 0; r < rows; ++r) {
    const double nr = A.row(r).norm();
    row_scale[r] = nr > 0.0 ? 1.0 / nr : 1.0;
    A.row(r) *= row_scale[r];
    b[r] *= row_scale[r];
  }
  const SpMat At = A.transpose();

  Eigen::VectorXd c = Eigen::VectorXd::Zero(cols);
  for (const auto& e : model.objective) c[svec_index(e.row, e.col)] -= svec_coef(e);
  for (int i = 0; i < lay.p; ++i) c[lay.nb + i] = -model.nonneg_objective[static_cast<std::size_t>(i)];

  Eigen::SparseMatrix<double> AAt = (A * At).eval();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol;
  if (rows > 0) {
    chol.compute(AAt);
    if (chol.info() != Eigen::Success) throw std::runtime_error("solve: constraint matrix factorization failed");
  }

  const double norm_b = safe_norm(b);
  const double norm_c = safe_norm(c);

  // The iteration is a fixed-point map on v = s - mu * x: s and x are the
  // Moreau parts of v, y solves the normal equations, and the next v follows.
  // Anderson acceleration with a residual safeguard is applied on top.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(cols);  // primal
  Eigen::VectorXd s = Eigen::VectorXd::Zero(cols);  // dual slack
  Eigen::VectorXd y = Eigen::VectorXd::Zero(rows);  // dual (minimization form)
  Eigen::VectorXd rhs(rows), aty(cols), ax(rows);
  ConeProjector proj(lay.order);
  double mu = options.initial_penalty;

  auto split = [&](const Eigen::VectorXd& vin) {
    s = vin;
    proj.project_block(s.head(lay.nb));
    for (int i = lay.nb; i < cols; ++i) s[i] = std::max(0.0, s[i]);
    x = (s - vin) / mu;
  };
  auto sweep = [&](const Eigen::VectorXd& vin, Eigen::VectorXd& vout) {
    split(vin);
    ax.noalias() = A * x;
    rhs = mu * (b - ax);
    rhs.noalias() -= A * (s - c);
    if (rows > 0) y = chol.solve(rhs);
    aty.noalias() = At * y;
    vout = c - aty - mu * x;
  };

  const int memory = options.anderson_memory;
  Eigen::MatrixXd dF(cols, std::max(memory, 1)), dT(cols, std::max(memory, 1));
  int hist = 0, head = 0;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(cols), tv(cols), f(cols);
  Eigen::VectorXd f_prev, tv_prev, v_plain;
  double fnorm_prev = std::numeric_limits<double>::infinity();
  bool last_accelerated = false;
  auto reset_history = [&] {
    hist = 0;
    head = 0;
    f_prev.resize(0);
  };

  int streak_primal = 0, streak_dual = 0;
  SdpSolution out;
  out.status = Status::max_iter;
  Residuals res;
  int it = 0;
  for (; it < options.max_iter; ++it) {
    sweep(v, tv);
    f = tv - v;
    const double fnorm = f.norm();
    if (last_accelerated && fnorm > 2.0 * fnorm_prev) {
      // reject the extrapolated point and take the plain step instead
      v = v_plain;
      reset_history();
      last_accelerated = false;
      continue;
    }

    const double pobj = c.dot(x);
    const double dobj = b.dot(y);
    res.primal = safe_norm(ax - b) / (1.0 + norm_b);
    res.dual = (aty + s - c).norm() / (1.0 + norm_c);
    res.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    if (std::max({res.primal, res.dual, res.gap}) <= options.tol) {
      out.status = Status::optimal;
      ++it;
      break;
    }

    // infeasibility: y diverges along a Farkas direction
    if (it % 200 == 199 && rows > 0) {
      const double ny = y.norm();
      if (ny > 1e8 * (1.0 + norm_c)) {
        const Eigen::VectorXd d = y / ny;
        Eigen::VectorXd atd = -(At * d);
        Eigen::VectorXd pd = atd;
        proj.project_block(pd.head(lay.nb));
        for (int i = lay.nb; i < cols; ++i) pd[i] = std::max(0.0, pd[i]);
        if (b.dot(d) > 1e-8 && (pd - atd).norm() < 1e-6) {
          out.status = Status::infeasible;
          ++it;
          break;
        }
      }
    }
    if (options.deadline && (it & 15) == 15 && std::chrono::steady_clock::now() > *options.deadline) {
      ++it;
      break;
    }

    // keep primal and dual residuals balanced
    if (res.primal > 5.0 * res.dual) {
      ++streak_primal;
      streak_dual = 0;
    } else if (res.dual > 5.0 * res.primal) {
      ++streak_dual;
      streak_primal = 0;
    } else {
      streak_primal = streak_dual = 0;
    }
    if (streak_primal >= 50 || streak_dual >= 50) {
      const double next_mu = streak_primal > 0 ? std::min(mu * 2.0, 1e6) : std::max(mu / 2.0, 1e-6);
      streak_primal = streak_dual = 0;
      if (next_mu != mu) {
        mu = next_mu;
        v = s - mu * x;  // same (x, s) expressed for the new penalty
        reset_history();
        last_accelerated = false;
        continue;
      }
    }

    if (memory == 0) {
      v = tv;
      continue;
    }
    if (f_prev.size() == cols) {
      dF.col(head) = f - f_prev;
      dT.col(head) = tv - tv_prev;
      head = (head + 1) % memory;
      hist = std::min(hist + 1, memory);
    }
    f_prev = f;
    tv_prev = tv;
    fnorm_prev = fnorm;
    v_plain = tv;
    if (hist == 0) {
      v = tv;
      last_accelerated = false;
      continue;
    }
    const auto F = dF.leftCols(hist);
    Eigen::MatrixXd gram = F.transpose() * F;
    gram.diagonal().array() += 1e-10 * (1.0 + gram.diagonal().maxCoeff());
    const Eigen::VectorXd gamma = gram.ldlt().solve(F.transpose() * f);
    if (!gamma.allFinite()) {
      v = tv;
      reset_history();
      last_accelerated = false;
      continue;
    }
    v = tv - dT.leftCols(hist) * gamma;
    last_accelerated = true;
  }

  out.iterations = it;
  out.residuals = res;
  smat(x.head(lay.nb), lay.order, out.Y);
  out.w = x.segment(lay.nb, lay.p);
  // back to the maximization form: multipliers are -y, rescaled per row
  out.eq_duals.resize(ne);
  for (int r = 0; r < ne; ++r) out.eq_duals[r] = -y[r] * row_scale[r];
  out.ineq_duals.resize(lay.q);
  for (int r = 0; r < lay.q; ++r) out.ineq_duals[r] = -y[ne + r] * row_scale[ne + r];
  out.objective_value = inner(model.objective, out.Y);
  for (int i = 0; i < lay.p; ++i) out.objective_value += model.nonneg_objective[static_cast<std::size_t>(i)] * out.w[i];
  return out;
}

}  // namespace detail

double safe_upper_bound(const SdpSolution& sol, const SdpModel& model) {
  const int r = model.block_order;
  Eigen::MatrixXd slack = -dense(model.objective, r);
  Eigen::VectorXd wslack(model.num_nonneg());
  for (int i = 0; i < model.num_nonneg(); ++i) wslack[i] = -model.nonneg_objective[static_cast<std::size_t>(i)];
  double bound = 0.0;
  auto accumulate = [&](const LinearConstraint& c, double mult) {
    if (mult == 0.0) return;
    bound += mult * c.rhs;
    for (const auto& e : c.block) {
      slack(e.row, e.col) += mult * e.value;
      if (e.row != e.col) slack(e.col, e.row) += mult * e.value;
    }
    for (const auto& t : c.nonneg) wslack[t.index] += mult * t.value;
  };
  for (std::size_t j = 0; j < model.equalities.size(); ++j) accumulate(model.equalities[j], sol.eq_duals[static_cast<Eigen::Index>(j)]);
  for (std::size_t j = 0; j < model.inequalities.size(); ++j)
    accumulate(model.inequalities[j], std::max(0.0, sol.ineq_duals[static_cast<Eigen::Index>(j)]));

  if (r > 0) {
    const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(slack, Eigen::EigenvaluesOnly).eigenvalues()[0];
    if (lmin < 0.0) bound += -lmin * model.trace_bound;
  }
  for (int i = 0; i < model.num_nonneg(); ++i)
    if (wslack[i] < 0.0) bound += -wslack[i] * model.nonneg_caps[static_cast<std::size_t>(i)];
  return bound;
}

void write_model(std::ostream& out, const SdpModel& model) {
  out << "SDPMODEL order " << model.block_order << " nonneg " << model.num_nonneg() << " eq "
      << model.equalities.size() << " ineq " << model.inequalities.size() << '\n';
  auto block = [&](const std::vector<SymEntry>& bl) {
    for (const auto& e : bl) out << " b " << e.row << ' ' << e.col << ' ' << e.value;
  };
  out << "obj";
  block(model.objective);
  for (int i = 0; i < model.num_nonneg(); ++i)
    if (model.nonneg_objective[static_cast<std::size_t>(i)] != 0.0)
      out << " w " << i << ' ' << model.nonneg_objective[static_cast<std::size_t>(i)];
  out << '\n';
  auto con = [&](const char* tag, const LinearConstraint& c) {
    out << tag;
    block(c.block);
    for (const auto& t : c.nonneg) out << " w " << t.index << ' ' << t.value;
    out << " rhs " << c.rhs << '\n';
  };
  for (const auto& c : model.equalities) con("eq", c);
  for (const auto& c : model.inequalities) con("le", c);
}

}  // namespace stabset::sdp
