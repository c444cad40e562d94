// Primal-dual interior-point method (HKM direction, Mehrotra predictor-corrector)
// for the single-block SdpModel: a psd block plus a nonnegative orthant that
// holds the model's nonneg variables followed by one slack per inequality.

#include "sdp_internal.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace stabset::sdp::detail {

namespace {

struct FullEntry {
  int a;
  int b;
  double v;
  int lb = 0;  // position of b in Row::support
};

struct Row {
  std::vector<FullEntry> block;  // both triangles
  std::vector<int> support;      // distinct column indices of block
  std::vector<std::pair<int, double>> lp;
};

struct Problem {
  int r = 0;   // psd order
  int nl = 0;  // orthant length
  std::vector<Row> rows;
  Eigen::VectorXd b;
  Eigen::VectorXd row_scale;
  Eigen::MatrixXd C;   // minimization cost, psd block
  Eigen::VectorXd cl;  // minimization cost, orthant
  std::vector<std::vector<std::pair<int, double>>> lp_cols;  // column view of the orthant part
};

Problem assemble(const SdpModel& model) {
  Problem P;
  P.r = model.block_order;
  const int p = model.num_nonneg();
  const int ne = static_cast<int>(model.equalities.size());
  const int nq = static_cast<int>(model.inequalities.size());
  P.nl = p + nq;
  const int nrows = ne + nq;
  P.rows.resize(static_cast<std::size_t>(nrows));
  P.b.resize(nrows);
  P.row_scale.resize(nrows);
  auto fill = [&](int ri, const LinearConstraint& c, int slack) {
    Row& row = P.rows[static_cast<std::size_t>(ri)];
    // merge duplicate positions
    std::vector<std::pair<int, int>> pos;
    for (const auto& e : c.block) {
      auto it = std::find(pos.begin(), pos.end(), std::make_pair(e.row, e.col));
      if (it == pos.end()) {
        pos.emplace_back(e.row, e.col);
        row.block.push_back({e.row, e.col, e.value});
      } else {
        row.block[static_cast<std::size_t>(it - pos.begin())].v += e.value;
      }
    }
    std::vector<FullEntry> full;
    for (const auto& e : row.block) {
      full.push_back(e);
      if (e.a != e.b) full.push_back({e.b, e.a, e.v});
    }
    row.block = std::move(full);
    for (auto& e : row.block) {
      auto it = std::find(row.support.begin(), row.support.end(), e.b);
      if (it == row.support.end()) it = row.support.insert(row.support.end(), e.b);
      e.lb = static_cast<int>(it - row.support.begin());
    }
    for (const auto& t : c.nonneg) {
      auto it = std::find_if(row.lp.begin(), row.lp.end(), [&](const auto& q) { return q.first == t.index; });
      if (it == row.lp.end())
        row.lp.emplace_back(t.index, t.value);
      else
        it->second += t.value;
    }
    if (slack >= 0) row.lp.emplace_back(p + slack, 1.0);
    double sq = 0.0;
    for (const auto& e : row.block) sq += e.v * e.v;
    for (const auto& [k, v] : row.lp) sq += v * v;
    const double s = sq > 0.0 ? 1.0 / std::sqrt(sq) : 1.0;
    for (auto& e : row.block) e.v *= s;
    for (auto& [k, v] : row.lp) v *= s;
    P.row_scale[ri] = s;
    P.b[ri] = c.rhs * s;
  };
  for (int i = 0; i < ne; ++i) fill(i, model.equalities[static_cast<std::size_t>(i)], -1);
  for (int i = 0; i < nq; ++i) fill(ne + i, model.inequalities[static_cast<std::size_t>(i)], i);

  P.C = -dense(model.objective, P.r);
  P.cl = Eigen::VectorXd::Zero(P.nl);
  for (int i = 0; i < p; ++i) P.cl[i] = -model.nonneg_objective[static_cast<std::size_t>(i)];
  P.lp_cols.resize(static_cast<std::size_t>(P.nl));
  for (int ri = 0; ri < nrows; ++ri)
    for (const auto& [k, v] : P.rows[static_cast<std::size_t>(ri)].lp) P.lp_cols[static_cast<std::size_t>(k)].emplace_back(ri, v);
  return P;
}

// <A_i, W> for every row (psd part only)
Eigen::VectorXd apply_block(const Problem& P, const Eigen::MatrixXd& W) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(P.rows.size()));
  for (std::size_t i = 0; i < P.rows.size(); ++i) {
    double s = 0.0;
    for (const auto& e : P.rows[i].block) s += e.v * W(e.a, e.b);
    out[static_cast<Eigen::Index>(i)] = s;
  }
  return out;
}

Eigen::VectorXd apply_lp(const Problem& P, const Eigen::VectorXd& xl) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(P.rows.size()));
  for (int k = 0; k < P.nl; ++k)
    for (const auto& [ri, v] : P.lp_cols[static_cast<std::size_t>(k)]) out[ri] += v * xl[k];
  return out;
}

Eigen::MatrixXd adjoint_block(const Problem& P, const Eigen::VectorXd& y) {
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(P.r, P.r);
  for (std::size_t i = 0; i < P.rows.size(); ++i) {
    const double yi = y[static_cast<Eigen::Index>(i)];
    if (yi == 0.0) continue;
    for (const auto& e : P.rows[i].block) S(e.a, e.b) += yi * e.v;
  }
  return S;
}

Eigen::VectorXd adjoint_lp(const Problem& P, const Eigen::VectorXd& y) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(P.nl);
  for (int k = 0; k < P.nl; ++k)
    for (const auto& [ri, v] : P.lp_cols[static_cast<std::size_t>(k)]) out[k] += v * y[ri];
  return out;
}

// Largest step in (0, inf] keeping X + a*dX psd; X must be positive definite.
double max_step_psd(const Eigen::MatrixXd& X, const Eigen::MatrixXd& dX) {
  if (X.rows() == 0) return std::numeric_limits<double>::infinity();
  Eigen::LLT<Eigen::MatrixXd> llt(X);
  if (llt.info() != Eigen::Success) return 0.0;
  Eigen::MatrixXd T = llt.matrixL().solve(dX);
  T = llt.matrixL().solve(T.transpose()).transpose();
  const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (T + T.transpose()), Eigen::EigenvaluesOnly)
                          .eigenvalues()[0];
  return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

double max_step_lp(const Eigen::VectorXd& x, const Eigen::VectorXd& dx) {
  double a = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (dx[i] < 0.0) a = std::min(a, -x[i] / dx[i]);
  return a;
}

Eigen::MatrixXd sym(const Eigen::MatrixXd& W) { return 0.5 * (W + W.transpose()); }

}  // namespace

SdpSolution solve_interior_point(const SdpModel& model, const SolverOptions& options) {
  const Problem P = assemble(model);
  const int r = P.r;
  const int nl = P.nl;
  const int m = static_cast<int>(P.rows.size());
  const double norm_b = P.b.size() ? P.b.norm() : 0.0;
  const double norm_c = std::sqrt(P.C.squaredNorm() + P.cl.squaredNorm());
  const double dim = static_cast<double>(r + nl);

  const double xi = std::max({10.0, std::sqrt(static_cast<double>(r)), 1.0 + norm_b});
  const double eta = std::max({10.0, std::sqrt(static_cast<double>(r)), 1.0 + norm_c});
  Eigen::MatrixXd X = xi * Eigen::MatrixXd::Identity(r, r);
  Eigen::MatrixXd Z = eta * Eigen::MatrixXd::Identity(r, r);
  // orthant entries are slacks of normalized rows or weights in [0, 1]
  Eigen::VectorXd xl = Eigen::VectorXd::Ones(nl);
  Eigen::VectorXd zl = Eigen::VectorXd::Ones(nl);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

  SdpSolution out;
  out.status = Status::max_iter;
  const int ne = static_cast<int>(model.equalities.size());
  auto store_duals = [&] {
    out.eq_duals.resize(ne);
    for (int i = 0; i < ne; ++i) out.eq_duals[i] = -y[i] * P.row_scale[i];
    out.ineq_duals.resize(m - ne);
    for (int i = ne; i < m; ++i) out.ineq_duals[i - ne] = -y[i] * P.row_scale[i];
  };
  Residuals res;
  Eigen::MatrixXd M(m, m);
  int it = 0;
  for (; it < options.ipm_max_iter; ++it) {
    const Eigen::VectorXd rp = P.b - apply_block(P, X) - apply_lp(P, xl);
    const Eigen::MatrixXd Rd = P.C - adjoint_block(P, y) - Z;
    const Eigen::VectorXd rdl = P.cl - adjoint_lp(P, y) - zl;
    const double pobj = (P.C.cwiseProduct(X)).sum() + P.cl.dot(xl);
    const double dobj = P.b.dot(y);
    res.primal = rp.size() ? rp.norm() / (1.0 + norm_b) : 0.0;
    res.dual = std::sqrt(Rd.squaredNorm() + rdl.squaredNorm()) / (1.0 + norm_c);
    res.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    if (std::max({res.primal, res.dual, res.gap}) <= options.tol) {
      out.status = Status::optimal;
      break;
    }
    if (options.deadline && std::chrono::steady_clock::now() > *options.deadline) break;
    if (options.cutoff && it > 0) {
      // pobj is the minimization form, so -pobj is the primal value of the model
      if (res.primal <= options.tol && -pobj > *options.cutoff && res.gap <= options.cutoff_gap) {
        out.status = Status::cutoff;
        break;
      }
      store_duals();
      if (safe_upper_bound(out, model) <= *options.cutoff) {
        out.status = Status::cutoff;
        break;
      }
    }
    // primal infeasibility shows up as an unbounded dual objective
    if (it > 20 && res.primal > 1e-3 && dobj > 1e8 * (1.0 + norm_c)) {
      out.status = Status::infeasible;
      break;
    }

    Eigen::LLT<Eigen::MatrixXd> zchol(Z);
    if (zchol.info() != Eigen::Success) break;
    const Eigen::MatrixXd Zinv = zchol.solve(Eigen::MatrixXd::Identity(r, r));
    const Eigen::VectorXd D = xl.cwiseQuotient(zl);

    // Schur complement  M_ij = tr(A_i X A_j Zinv) + (B D B')_ij, using
    // G_i = X A_i Zinv so that M_ij = <A_j, G_i>
    Eigen::MatrixXd G(r, r);
    for (int i = 0; i < m; ++i) {
      const Row& Ri = P.rows[static_cast<std::size_t>(i)];
      const auto& S = Ri.support;
      const int c = static_cast<int>(S.size());
      Eigen::MatrixXd XA = Eigen::MatrixXd::Zero(r, c);
      for (const auto& e : Ri.block) XA.col(e.lb) += e.v * X.col(e.a);
      Eigen::MatrixXd Zs(c, r);
      for (int t = 0; t < c; ++t) Zs.row(t) = Zinv.row(S[static_cast<std::size_t>(t)]);
      G.noalias() = XA * Zs;
      for (int j = i; j < m; ++j) {
        double s = 0.0;
        for (const auto& f : P.rows[static_cast<std::size_t>(j)].block) s += f.v * G(f.a, f.b);
        M(i, j) = s;
      }
    }
    for (int k = 0; k < nl; ++k) {
      const auto& col = P.lp_cols[static_cast<std::size_t>(k)];
      for (const auto& [ri, vi] : col)
        for (const auto& [rj, vj] : col)
          if (ri <= rj) M(ri, rj) += vi * vj * D[k];
    }
    M.triangularView<Eigen::StrictlyLower>() = M.triangularView<Eigen::StrictlyUpper>().transpose();
    Eigen::LLT<Eigen::MatrixXd> mchol;
    double reg = 0.0;
    for (int attempt = 0; attempt < 6; ++attempt) {
      Eigen::MatrixXd Mr = M;
      if (reg > 0.0) Mr.diagonal().array() += reg;
      mchol.compute(Mr);
      if (mchol.info() == Eigen::Success) break;
      reg = reg == 0.0 ? 1e-14 * (1.0 + M.diagonal().cwiseAbs().maxCoeff()) : reg * 100.0;
    }
    if (mchol.info() != Eigen::Success) break;

    const Eigen::MatrixXd XRdZinv = X * Rd * Zinv;
    auto direction = [&](const Eigen::MatrixXd& Rc, const Eigen::VectorXd& rcl, Eigen::MatrixXd& dX, Eigen::MatrixXd& dZ,
                         Eigen::VectorXd& dxl, Eigen::VectorXd& dzl, Eigen::VectorXd& dy) {
      const Eigen::VectorXd rhs = rp - apply_block(P, Rc - XRdZinv) - apply_lp(P, rcl - D.cwiseProduct(rdl));
      dy = mchol.solve(rhs);
      dZ = Rd - adjoint_block(P, dy);
      dzl = rdl - adjoint_lp(P, dy);
      dX = Rc - sym(X * dZ * Zinv);
      dxl = rcl - D.cwiseProduct(dzl);
    };

    const double mu = ((X.cwiseProduct(Z)).sum() + xl.dot(zl)) / dim;
    Eigen::MatrixXd dX, dZ;
    Eigen::VectorXd dxl, dzl, dy;
    direction(-X, -xl, dX, dZ, dxl, dzl, dy);
    double ap = std::min({1.0, max_step_psd(X, dX), max_step_lp(xl, dxl)});
    double ad = std::min({1.0, max_step_psd(Z, dZ), max_step_lp(zl, dzl)});
    const double mu_aff =
        (((X + ap * dX).cwiseProduct(Z + ad * dZ)).sum() + (xl + ap * dxl).dot(zl + ad * dzl)) / dim;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    const Eigen::MatrixXd Rc = sigma * mu * Zinv - X - sym(dX * dZ * Zinv);
    const Eigen::VectorXd rcl =
        (sigma * mu * zl.cwiseInverse() - xl - dxl.cwiseProduct(dzl).cwiseQuotient(zl)).eval();
    direction(Rc, rcl, dX, dZ, dxl, dzl, dy);
    const double gamma = 0.9 + 0.09 * std::min(ap, ad);
    ap = std::min(1.0, gamma * std::min(max_step_psd(X, dX), max_step_lp(xl, dxl)));
    ad = std::min(1.0, gamma * std::min(max_step_psd(Z, dZ), max_step_lp(zl, dzl)));
    X = sym(X + ap * dX);
    xl += ap * dxl;
    Z = sym(Z + ad * dZ);
    zl += ad * dzl;
    y += ad * dy;
  }

  out.iterations = it;
  out.residuals = res;
  out.Y = X;
  out.w = xl.head(model.num_nonneg());
  store_duals();
  out.objective_value = inner(model.objective, out.Y);
  for (int i = 0; i < model.num_nonneg(); ++i) out.objective_value += model.nonneg_objective[static_cast<std::size_t>(i)] * out.w[i];
  return out;
}

}  // namespace stabset::sdp::detail
