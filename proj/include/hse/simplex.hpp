// SPDX-License-Identifier: Apache-2.0
//
// Dense two-phase primal simplex with Bland's rule.
//
//   minimize  c'x
//   s.t.      A_eq x  = b_eq
//             A_ub x <= b_ub
//             x >= 0
//
// Sized for the small dense programs produced by the L1 recovery
// reformulations (a few hundred rows, a thousand or so columns).
#pragma once

#include <limits>
#include <vector>

#include "hse/linalg.hpp"

namespace hse {

struct LinearProgram {
  Vector cost;
  Matrix a_eq;
  Vector b_eq;
  Matrix a_ub;
  Vector b_ub;

  Index variable_count() const noexcept { return cost.size(); }
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

inline const char* to_string(LpStatus s) noexcept {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

struct SimplexOptions {
  int max_iterations = 500'000;
  double tolerance = 1e-9;
};

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Vector x;
  double objective = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
};

namespace detail {

class Tableau {
 public:
  using Storage = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Tableau(Index rows, Index cols) : t_(Storage::Zero(rows + 1, cols + 1)), basis_(rows, -1) {}

  Storage& data() { return t_; }
  Index rows() const { return t_.rows() - 1; }
  Index cols() const { return t_.cols() - 1; }
  double& rhs(Index i) { return t_(i, cols()); }
  auto objective_row() { return t_.row(rows()); }
  std::vector<Index>& basis() { return basis_; }

  void pivot(Index r, Index c) {
    t_.row(r) /= t_(r, c);
    for (Index i = 0; i <= rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  /// Largest reduced cost enters; after a run of degenerate pivots Bland's
  /// rule takes over until the objective moves again. `allowed` bounds the
  /// admissible entering columns.
  LpStatus run(Index allowed, const std::vector<bool>& active_row, const SimplexOptions& opt,
               int& iterations) {
    const Index m = rows();
    int degenerate = 0;
    while (true) {
      if (iterations >= opt.max_iterations) return LpStatus::iteration_limit;
      const bool bland = degenerate > 50;
      Index enter = -1;
      double most = -opt.tolerance;
      for (Index j = 0; j < allowed; ++j) {
        if (t_(m, j) < most) {
          enter = j;
          if (bland) break;
          most = t_(m, j);
        }
      }
      if (enter < 0) return LpStatus::optimal;
      Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < m; ++i) {
        if (!active_row[static_cast<std::size_t>(i)]) continue;
        const double a = t_(i, enter);
        if (a <= opt.tolerance) continue;
        const double ratio = std::max(rhs(i), 0.0) / a;
        if (ratio < best - 1e-12 ||
            (ratio <= best + 1e-12 && leave >= 0 &&
             (bland ? basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)]
                    : a > t_(leave, enter)))) {
          if (ratio < best) best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return LpStatus::unbounded;
      degenerate = best <= 1e-12 ? degenerate + 1 : 0;
      pivot(leave, enter);
      ++iterations;
    }
  }

 private:
  Storage t_;
  std::vector<Index> basis_;
};

}  // namespace detail

inline LpResult solve_lp(const LinearProgram& lp, const SimplexOptions& opt = {}) {
  const Index n = lp.variable_count();
  const Index me = lp.a_eq.rows();
  const Index mu = lp.a_ub.rows();
  if ((me > 0 && (lp.a_eq.cols() != n || lp.b_eq.size() != me)) ||
      (mu > 0 && (lp.a_ub.cols() != n || lp.b_ub.size() != mu)))
    throw ArgumentError("linear program dimensions are inconsistent");
  const Index m = me + mu;
  const Index ns = n + mu;  // structural + slack columns
  LpResult res;

  // Standard form with equilibrated, sign-normalized rows.
  Matrix a = Matrix::Zero(m, ns);
  Vector b(m);
  if (me > 0) {
    a.topLeftCorner(me, n) = lp.a_eq;
    b.head(me) = lp.b_eq;
  }
  if (mu > 0) {
    a.block(me, 0, mu, n) = lp.a_ub;
    a.block(me, n, mu, mu).setIdentity();
    b.tail(mu) = lp.b_ub;
  }
  for (Index i = 0; i < m; ++i) {
    double s = a.row(i).cwiseAbs().maxCoeff();
    if (s == 0.0) {
      if (std::abs(b(i)) > opt.tolerance) {
        res.status = LpStatus::infeasible;
        return res;
      }
      s = 1.0;
    }
    if (b(i) < 0.0) s = -s;
    a.row(i) /= s;
    b(i) /= s;
  }

  detail::Tableau tab(m, ns + m);
  auto& t = tab.data();
  t.topLeftCorner(m, ns) = a;
  t.block(0, ns, m, m).setIdentity();
  t.col(ns + m).head(m) = b;
  for (Index i = 0; i < m; ++i) tab.basis()[static_cast<std::size_t>(i)] = ns + i;
  // Phase I objective: sum of artificials, expressed in reduced costs.
  t.row(m).setZero();
  for (Index i = 0; i < m; ++i) t.row(m).head(ns) -= t.row(i).head(ns);
  t(m, ns + m) = -b.sum();

  std::vector<bool> active(static_cast<std::size_t>(m), true);
  LpStatus st = tab.run(ns, active, opt, res.iterations);
  if (st == LpStatus::iteration_limit) {
    res.status = st;
    return res;
  }
  const double infeas = -t(m, ns + m);
  if (infeas > 1e-8 * (1.0 + b.cwiseAbs().sum())) {
    res.status = LpStatus::infeasible;
    return res;
  }
  // Drive remaining artificials out of the basis; rows that cannot pivot are redundant.
  for (Index i = 0; i < m; ++i) {
    if (tab.basis()[static_cast<std::size_t>(i)] < ns) continue;
    Index col = -1;
    double best = 1e-9;
    for (Index j = 0; j < ns; ++j) {
      if (std::abs(t(i, j)) > best) {
        best = std::abs(t(i, j));
        col = j;
      }
    }
    if (col >= 0) {
      tab.pivot(i, col);
    } else {
      active[static_cast<std::size_t>(i)] = false;
    }
  }

  // Phase II.
  t.row(m).setZero();
  t.row(m).head(n) = lp.cost.transpose();
  for (Index i = 0; i < m; ++i) {
    if (!active[static_cast<std::size_t>(i)]) continue;
    const Index bi = tab.basis()[static_cast<std::size_t>(i)];
    const double cb = t(m, bi);
    if (cb != 0.0) t.row(m) -= cb * t.row(i);
  }
  st = tab.run(ns, active, opt, res.iterations);
  if (st != LpStatus::optimal) {
    res.status = st;
    return res;
  }

  // Recompute the basic solution from the original data to shed pivoting drift.
  std::vector<Index> rows, cols;
  for (Index i = 0; i < m; ++i) {
    if (!active[static_cast<std::size_t>(i)]) continue;
    rows.push_back(i);
    cols.push_back(tab.basis()[static_cast<std::size_t>(i)]);
  }
  Vector xs = Vector::Zero(ns);
  for (std::size_t k = 0; k < rows.size(); ++k) xs(cols[k]) = std::max(tab.rhs(rows[k]), 0.0);
  if (!rows.empty()) {
    Matrix basis_mat(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    Vector rhs(static_cast<Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      rhs(static_cast<Index>(r)) = b(rows[r]);
      for (std::size_t c = 0; c < cols.size(); ++c)
        basis_mat(static_cast<Index>(r), static_cast<Index>(c)) = a(rows[r], cols[c]);
    }
    Eigen::FullPivLU<Matrix> lu(basis_mat);
    if (lu.isInvertible()) {
      const Vector xb = lu.solve(rhs);
      if (xb.allFinite() && xb.minCoeff() > -1e-7 * (1.0 + xb.cwiseAbs().maxCoeff())) {
        Vector cand = Vector::Zero(ns);
        for (std::size_t k = 0; k < cols.size(); ++k)
          cand(cols[k]) = std::max(xb(static_cast<Index>(k)), 0.0);
        if ((a * cand - b).cwiseAbs().maxCoeff() <= (a * xs - b).cwiseAbs().maxCoeff() + 1e-12)
          xs = cand;
      }
    }
  }
  res.x = xs.head(n);
  res.objective = lp.cost.dot(res.x);
  res.status = LpStatus::optimal;
  return res;
}

}  // namespace hse
