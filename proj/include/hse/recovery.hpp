// SPDX-License-Identifier: Apache-2.0
//
// Sparse recovery for real systems y = H x:
//   exhaustive L0 search, basis pursuit and its noisy L1/L-inf variants as
//   linear programs, BPDN, LASSO, the Dantzig selector, OMP, CoSaMP and IHT.
#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <string_view>

#include "hse/linalg.hpp"
#include "hse/simplex.hpp"

namespace hse {

enum class Solver { l0_oracle, bp_lp, bp_noisy_l1, bp_noisy_linf, bpdn, lasso, dantzig, omp, cosamp, iht };

inline constexpr std::string_view to_string(Solver s) noexcept {
  switch (s) {
    case Solver::l0_oracle: return "l0_oracle";
    case Solver::bp_lp: return "bp_lp";
    case Solver::bp_noisy_l1: return "bp_noisy_l1";
    case Solver::bp_noisy_linf: return "bp_noisy_linf";
    case Solver::bpdn: return "bpdn";
    case Solver::lasso: return "lasso";
    case Solver::dantzig: return "dantzig";
    case Solver::omp: return "omp";
    case Solver::cosamp: return "cosamp";
    case Solver::iht: return "iht";
  }
  return "unknown";
}

inline Solver solver_from_string(std::string_view name) {
  for (Solver s : {Solver::l0_oracle, Solver::bp_lp, Solver::bp_noisy_l1, Solver::bp_noisy_linf,
                   Solver::bpdn, Solver::lasso, Solver::dantzig, Solver::omp, Solver::cosamp,
                   Solver::iht})
    if (to_string(s) == name) return s;
  throw ArgumentError("unknown solver '" + std::string(name) + "'");
}

struct SolverConfig {
  double epsilon = 0.01;
  double lambda = 1e-3;
  int max_iterations = 10'000;
  double convergence_tol = 1e-8;
  int sparsity_k = 0;

  void validate() const {
    if (!(epsilon >= 0.0)) throw ArgumentError("epsilon must be >= 0");
    if (!(lambda >= 0.0)) throw ArgumentError("lambda must be >= 0");
    if (max_iterations < 1) throw ArgumentError("max_iterations must be >= 1");
  }
};

struct RecoveryResult {
  Vector x_hat;
  double residual_l2 = 0.0;
  Solver solver = Solver::bp_lp;
  int iterations = 0;
  bool converged = false;
  double objective_value = 0.0;
  bool ill_conditioned = false;  ///< a least-squares step fell back to a pseudo-inverse
  std::vector<double> objective_trace;  ///< per-iteration objective (LASSO only)

  Index support_size(double threshold = 0.0) const {
    return (x_hat.array().abs() > threshold).count();
  }
};

namespace detail {

inline void check_system(const Matrix& h, const Vector& y) {
  if (h.rows() != y.size())
    throw ArgumentError("measurement vector has length " + std::to_string(y.size()) +
                        ", sensing matrix has " + std::to_string(h.rows()) + " rows");
}

inline RecoveryResult finish(Solver s, const Matrix& h, const Vector& y, Vector x) {
  RecoveryResult r;
  r.solver = s;
  r.residual_l2 = (y - h * x).norm();
  r.objective_value = x.lpNorm<1>();
  r.x_hat = std::move(x);
  return r;
}

inline Vector hard_threshold(const Vector& v, Index k) {
  if (k >= v.size()) return v;
  std::vector<Index> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Index a, Index b) { return std::abs(v(a)) > std::abs(v(b)); });
  Vector out = Vector::Zero(v.size());
  for (Index i = 0; i < k; ++i) out(idx[static_cast<std::size_t>(i)]) = v(idx[static_cast<std::size_t>(i)]);
  return out;
}

/// Indices of the k largest |v|, ties broken by lower index.
inline std::vector<Index> top_k(const Vector& v, Index k) {
  std::vector<Index> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Index a, Index b) { return std::abs(v(a)) > std::abs(v(b)); });
  idx.resize(static_cast<std::size_t>(std::min(k, v.size())));
  std::sort(idx.begin(), idx.end());
  return idx;
}

/// Least squares restricted to `support`; zero elsewhere.
inline Vector restricted_ls(const Matrix& h, const Vector& y, const std::vector<Index>& support,
                            bool* ill = nullptr) {
  Vector x = Vector::Zero(h.cols());
  if (support.empty()) return x;
  bool deficient = false;
  const Vector coef = least_squares(select_columns(h, support), y, &deficient);
  if (ill) *ill = *ill || deficient;
  for (std::size_t i = 0; i < support.size(); ++i) x(support[i]) = coef(static_cast<Index>(i));
  return x;
}

inline Vector soft_threshold(const Vector& v, double t) {
  return v.array().sign() * (v.array().abs() - t).max(0.0);
}

inline Vector split_to_signed(const Vector& z, Index n) { return z.head(n) - z.segment(n, n); }

inline Matrix split_matrix(const Matrix& h) {
  Matrix out(h.rows(), 2 * h.cols());
  out << h, -h;
  return out;
}

inline RecoveryResult lp_outcome(Solver s, const Matrix& h, const Vector& y, const LpResult& lp,
                                 const char* what) {
  if (lp.status == LpStatus::infeasible) throw InfeasibleError(std::string(what) + ": infeasible");
  if (lp.status == LpStatus::unbounded)
    throw Error(std::string(what) + ": linear program unbounded (internal error)");
  if (lp.status == LpStatus::iteration_limit)
    throw Error(std::string(what) + ": simplex iteration limit reached");
  RecoveryResult r = finish(s, h, y, split_to_signed(lp.x, h.cols()));
  r.iterations = lp.iterations;
  r.converged = lp.status == LpStatus::optimal;
  return r;
}

}  // namespace detail

/// Minimum-support x with |y - Hx|_2 <= 1e-8 |y|_2, by enumerating supports of
/// increasing size.
inline RecoveryResult l0_oracle(const Matrix& h, const Vector& y, int k_max) {
  detail::check_system(h, y);
  const Index n = h.cols();
  const Index top = std::min<Index>(k_max, n);
  std::uint64_t total = 0;
  for (Index s = 0; s <= top; ++s) {
    total += binomial_capped(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(s));
    if (total > 10'000'000)
      throw ComplexityError("L0 search over supports up to size " + std::to_string(k_max) +
                            " exceeds the enumeration budget");
  }
  const double tol = 1e-8 * y.norm();
  int visited = 0;
  for (Index s = 0; s <= top; ++s) {
    std::optional<Vector> found;
    for_each_subset(n, s, [&](const std::vector<Index>& support) {
      ++visited;
      Vector x = detail::restricted_ls(h, y, support);
      if ((y - h * x).norm() <= tol) {
        found = std::move(x);
        return false;
      }
      return true;
    });
    if (found) {
      RecoveryResult r = detail::finish(Solver::l0_oracle, h, y, *found);
      r.iterations = visited;
      r.converged = true;
      return r;
    }
  }
  RecoveryResult r = detail::finish(Solver::l0_oracle, h, y, Vector::Zero(n));
  r.iterations = visited;
  r.converged = false;
  return r;
}

/// min |x|_1 s.t. Hx = y via x = x+ - x-.
inline RecoveryResult bp_lp(const Matrix& h, const Vector& y, const SimplexOptions& opt = {}) {
  detail::check_system(h, y);
  LinearProgram lp;
  lp.cost = Vector::Ones(2 * h.cols());
  lp.a_eq = detail::split_matrix(h);
  lp.b_eq = y;
  return detail::lp_outcome(Solver::bp_lp, h, y, solve_lp(lp, opt), "basis pursuit");
}

enum class ResidualNorm { l1, linf };

/// min |x|_1 s.t. |y - Hx|_p <= epsilon, p in {1, inf}.
inline RecoveryResult bp_noisy(const Matrix& h, const Vector& y, double epsilon, ResidualNorm norm,
                               const SimplexOptions& opt = {}) {
  detail::check_system(h, y);
  if (!(epsilon >= 0.0)) throw ArgumentError("epsilon must be >= 0");
  const Index m = h.rows(), n = h.cols();
  const Matrix hs = detail::split_matrix(h);
  LinearProgram lp;
  if (norm == ResidualNorm::linf) {
    lp.cost = Vector::Ones(2 * n);
    lp.a_ub.resize(2 * m, 2 * n);
    lp.a_ub << hs, -hs;
    lp.b_ub.resize(2 * m);
    lp.b_ub << y.array() + epsilon, epsilon - y.array();
  } else {
    // Variables [x+, x-, t]: -t <= y - Hx <= t, sum t <= epsilon.
    lp.cost = Vector::Zero(2 * n + m);
    lp.cost.head(2 * n).setOnes();
    lp.a_ub = Matrix::Zero(2 * m + 1, 2 * n + m);
    lp.a_ub.topLeftCorner(m, 2 * n) = hs;
    lp.a_ub.block(0, 2 * n, m, m) = -Matrix::Identity(m, m);
    lp.a_ub.block(m, 0, m, 2 * n) = -hs;
    lp.a_ub.block(m, 2 * n, m, m) = -Matrix::Identity(m, m);
    lp.a_ub.block(2 * m, 2 * n, 1, m).setOnes();
    lp.b_ub.resize(2 * m + 1);
    lp.b_ub << y, -y, epsilon;
  }
  const Solver s = norm == ResidualNorm::l1 ? Solver::bp_noisy_l1 : Solver::bp_noisy_linf;
  LpResult res = solve_lp(lp, opt);
  if (res.status == LpStatus::optimal) res.x.conservativeResize(2 * n);
  return detail::lp_outcome(s, h, y, res, "noisy basis pursuit");
}

/// min |x|_1 s.t. |H'(y - Hx)|_inf <= epsilon.
inline RecoveryResult dantzig(const Matrix& h, const Vector& y, double epsilon,
                              const SimplexOptions& opt = {}) {
  detail::check_system(h, y);
  if (!(epsilon >= 0.0)) throw ArgumentError("epsilon must be >= 0");
  const Index n = h.cols();
  const Matrix g = h.transpose() * h;
  const Vector hty = h.transpose() * y;
  const Matrix gs = detail::split_matrix(g);
  LinearProgram lp;
  lp.cost = Vector::Ones(2 * n);
  lp.a_ub.resize(2 * n, 2 * n);
  lp.a_ub << gs, -gs;
  lp.b_ub.resize(2 * n);
  lp.b_ub << hty.array() + epsilon, epsilon - hty.array();
  return detail::lp_outcome(Solver::dantzig, h, y, solve_lp(lp, opt), "Dantzig selector");
}

namespace detail {

inline double lasso_objective(const Matrix& h, const Vector& y, const Vector& x, double lambda) {
  return (y - h * x).squaredNorm() + lambda * x.lpNorm<1>();
}

/// Monotone FISTA on |y - Hx|^2 + lambda |x|_1 from `x`, step 1/L.
inline RecoveryResult mfista(const Matrix& h, const Vector& y, double lambda, Vector x, double lip,
                             const SolverConfig& cfg, bool trace, int& budget) {
  RecoveryResult r;
  r.solver = Solver::lasso;
  const Matrix ht = h.transpose();
  Vector z = x;
  double t = 1.0;
  double f = lasso_objective(h, y, x, lambda);
  if (trace) r.objective_trace.push_back(f);
  const double step = 1.0 / lip;
  int it = 0;
  while (budget > 0) {
    --budget;
    ++it;
    const Vector grad = 2.0 * (ht * (h * z - y));
    const Vector u = soft_threshold(z - step * grad, lambda * step);
    const double fu = lasso_objective(h, y, u, lambda);
    const Vector x_prev = x;
    const double f_prev = f;
    if (fu <= f) {
      x = u;
      f = fu;
    }
    const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    z = x + (t / t_next) * (u - x) + ((t - 1.0) / t_next) * (x - x_prev);
    t = t_next;
    if (trace) r.objective_trace.push_back(f);
    const double dx = (x - x_prev).norm();
    if (dx <= cfg.convergence_tol * std::max(1.0, x.norm()) &&
        std::abs(f_prev - f) <= cfg.convergence_tol * std::max(1.0, std::abs(f)) &&
        (u - x).norm() <= cfg.convergence_tol * std::max(1.0, x.norm())) {
      r.converged = true;
      break;
    }
  }
  r.iterations = it;
  r.x_hat = std::move(x);
  r.objective_value = f;
  return r;
}

inline double lasso_lipschitz(const Matrix& h) {
  const double s = spectral_norm(h);
  return std::max(2.0 * s * s, 1e-300);
}

}  // namespace detail

namespace detail {

inline RecoveryResult lasso_from(const Matrix& h, const Vector& y, double lambda, Vector x,
                                 double lip, const SolverConfig& cfg) {
  const double lam_max = 2.0 * (h.transpose() * y).cwiseAbs().maxCoeff();
  if (lambda >= lam_max || y.norm() == 0.0) {
    RecoveryResult r = finish(Solver::lasso, h, y, Vector::Zero(h.cols()));
    r.converged = true;
    r.objective_value = lasso_objective(h, y, r.x_hat, lambda);
    r.objective_trace = {r.objective_value};
    return r;
  }
  int budget = cfg.max_iterations;
  int used = 0;
  // Continuation stages from lambda_max, each with a small share of the budget.
  const double start = x.isZero(0.0) ? lam_max / 4.0 : 0.0;
  for (double lam = start; lam > lambda * 4.0 && budget > cfg.max_iterations / 2; lam /= 4.0) {
    int stage = std::min(budget - cfg.max_iterations / 2, std::max(50, cfg.max_iterations / 40));
    const int before = stage;
    x = mfista(h, y, lam, x, lip, cfg, false, stage).x_hat;
    budget -= before - stage;
    used += before - stage;
  }
  RecoveryResult r = mfista(h, y, lambda, std::move(x), lip, cfg, true, budget);
  r.iterations += used;
  r.residual_l2 = (y - h * r.x_hat).norm();
  return r;
}

}  // namespace detail

/// min |y - Hx|_2^2 + lambda |x|_1 by monotone accelerated proximal gradient.
/// A geometric continuation from lambda_max warms the start; `objective_trace`
/// holds the target-lambda iterations, which never increase the objective.
inline RecoveryResult lasso(const Matrix& h, const Vector& y, double lambda,
                            const SolverConfig& cfg = {}) {
  detail::check_system(h, y);
  if (!(lambda >= 0.0)) throw ArgumentError("lambda must be >= 0");
  cfg.validate();
  return detail::lasso_from(h, y, lambda, Vector::Zero(h.cols()), detail::lasso_lipschitz(h), cfg);
}

/// min |x|_1 s.t. |y - Hx|_2 <= epsilon, by bisection on the LASSO weight until
/// the residual meets epsilon to within 1e-6 from the feasible side.
inline RecoveryResult bpdn(const Matrix& h, const Vector& y, double epsilon,
                           const SolverConfig& cfg = {}, const SimplexOptions& lp_opt = {}) {
  detail::check_system(h, y);
  if (!(epsilon >= 0.0)) throw ArgumentError("epsilon must be >= 0");
  const Index n = h.cols();
  if (epsilon >= y.norm()) {
    RecoveryResult r = detail::finish(Solver::bpdn, h, y, Vector::Zero(n));
    r.converged = true;
    return r;
  }
  if (epsilon == 0.0) {
    RecoveryResult r = bp_lp(h, y, lp_opt);
    r.solver = Solver::bpdn;
    return r;
  }
  const Vector x_ls = least_squares(h, y);
  const double r_min = (y - h * x_ls).norm();
  if (epsilon < r_min - 1e-9 * std::max(1.0, y.norm()))
    throw InfeasibleError("BPDN infeasible: epsilon " + std::to_string(epsilon) +
                          " is below the least-squares residual " + std::to_string(r_min));

  constexpr double tol = 1e-6;
  const double lip = detail::lasso_lipschitz(h);
  const double lam_max = 2.0 * (h.transpose() * y).cwiseAbs().maxCoeff();
  int total = 0;
  auto solve = [&](double lam, const Vector& warm) {
    RecoveryResult r = detail::lasso_from(h, y, lam, warm, lip, cfg);
    total += r.iterations;
    return r;
  };

  // Residual grows with lambda: bracket epsilon as residual(lo) <= eps < residual(hi).
  double hi = lam_max;
  double lo = lam_max;
  std::optional<RecoveryResult> feasible;
  Vector warm = Vector::Zero(n);
  while (lo > lam_max * 1e-14) {
    lo /= 16.0;
    RecoveryResult r = solve(lo, warm);
    warm = r.x_hat;
    if (r.residual_l2 <= epsilon + tol) {
      feasible = std::move(r);
      break;
    }
    hi = lo;
  }
  if (feasible && feasible->residual_l2 < epsilon - tol) {
    for (int step = 0; step < 60 && hi / lo > 1.0 + 1e-10; ++step) {
      const double mid = std::sqrt(lo * hi);
      RecoveryResult r = solve(mid, feasible->x_hat);
      if (r.residual_l2 <= epsilon + tol) {
        lo = mid;
        const bool done = r.residual_l2 >= epsilon - tol;
        feasible = std::move(r);
        if (done) break;
      } else {
        hi = mid;
      }
    }
  }
  RecoveryResult out = detail::finish(Solver::bpdn, h, y, feasible ? feasible->x_hat : x_ls);
  out.iterations = total;
  out.converged = feasible.has_value() && std::abs(out.residual_l2 - epsilon) <= tol;
  return out;
}

/// Orthogonal matching pursuit with normalized-column correlations.
inline RecoveryResult omp(const Matrix& h, const Vector& y, int k, const SolverConfig& cfg = {}) {
  detail::check_system(h, y);
  const Index n = h.cols();
  if (k < 0 || k > std::min(h.rows(), n))
    throw ArgumentError("OMP sparsity k = " + std::to_string(k) + " exceeds min(m, n)");
  Vector norms = h.colwise().norm().transpose();
  for (Index j = 0; j < n; ++j)
    if (norms(j) == 0.0) throw ArgumentError("column " + std::to_string(j) + " is zero");
  RecoveryResult r;
  r.solver = Solver::omp;
  Vector x = Vector::Zero(n);
  Vector residual = y;
  std::vector<Index> support;
  const double stop = cfg.convergence_tol * std::max(y.norm(), 1e-300);
  while (static_cast<int>(support.size()) < k && residual.norm() > stop) {
    Vector corr = (h.transpose() * residual).cwiseQuotient(norms).cwiseAbs();
    for (Index s : support) corr(s) = -1.0;
    Index best = 0;
    corr.maxCoeff(&best);
    support.push_back(best);
    std::vector<Index> sorted = support;
    std::sort(sorted.begin(), sorted.end());
    x = detail::restricted_ls(h, y, sorted, &r.ill_conditioned);
    residual = y - h * x;
    ++r.iterations;
  }
  r.x_hat = x;
  r.residual_l2 = residual.norm();
  r.objective_value = x.lpNorm<1>();
  r.converged = true;
  return r;
}

/// Compressive sampling matching pursuit.
inline RecoveryResult cosamp(const Matrix& h, const Vector& y, int k, const SolverConfig& cfg = {}) {
  detail::check_system(h, y);
  const Index m = h.rows(), n = h.cols();
  if (k < 0 || 3 * k > m)
    throw ArgumentError("CoSaMP needs 3k <= m (k = " + std::to_string(k) + ", m = " +
                        std::to_string(m) + ")");
  Vector norms = h.colwise().norm().transpose();
  for (Index j = 0; j < n; ++j)
    if (norms(j) == 0.0) throw ArgumentError("column " + std::to_string(j) + " is zero");
  RecoveryResult r;
  r.solver = Solver::cosamp;
  Vector x = Vector::Zero(n);
  Vector residual = y;
  const double ynorm = y.norm();
  if (ynorm == 0.0 || k == 0) {
    r = detail::finish(Solver::cosamp, h, y, x);
    r.converged = true;
    return r;
  }
  double prev = residual.norm();
  for (int it = 0; it < cfg.max_iterations; ++it) {
    ++r.iterations;
    const Vector proxy = (h.transpose() * residual).cwiseQuotient(norms);
    std::vector<Index> merged = detail::top_k(proxy, 2 * k);
    for (Index j = 0; j < n; ++j)
      if (x(j) != 0.0) merged.push_back(j);
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    const Vector b = detail::restricted_ls(h, y, merged, &r.ill_conditioned);
    // Prune by contribution in the normalized scale, then refit on the kept support.
    const std::vector<Index> kept = detail::top_k(b.cwiseProduct(norms), k);
    x = detail::restricted_ls(h, y, kept, &r.ill_conditioned);
    residual = y - h * x;
    const double rn = residual.norm();
    if (rn <= cfg.convergence_tol * ynorm) {
      r.converged = true;
      break;
    }
    if (std::abs(prev - rn) <= cfg.convergence_tol * ynorm) {
      r.converged = true;
      break;
    }
    prev = rn;
  }
  r.x_hat = x;
  r.residual_l2 = residual.norm();
  r.objective_value = x.lpNorm<1>();
  return r;
}

/// Normalized iterative hard thresholding on H / |H|_2; returns the best iterate by residual.
inline RecoveryResult iht(const Matrix& h, const Vector& y, int k, const SolverConfig& cfg = {}) {
  detail::check_system(h, y);
  const Index n = h.cols();
  if (k < 0 || k > n) throw ArgumentError("IHT sparsity k out of range");
  RecoveryResult r;
  r.solver = Solver::iht;
  const double scale = spectral_norm(h);
  if (scale == 0.0 || y.norm() == 0.0 || k == 0) {
    r = detail::finish(Solver::iht, h, y, Vector::Zero(n));
    r.converged = true;
    return r;
  }
  const Matrix hs = h / scale;
  const Vector ys = y / scale;
  const Matrix hst = hs.transpose();
  // Normalized step: exact line search on the current support, halved while
  // a support change makes it too long.
  auto support_of = [](const Vector& v) {
    std::vector<Index> s;
    for (Index i = 0; i < v.size(); ++i)
      if (v(i) != 0.0) s.push_back(i);
    return s;
  };
  Vector x = Vector::Zero(n);
  Vector best = x;
  double best_res = ys.norm();
  for (int it = 0; it < cfg.max_iterations; ++it) {
    ++r.iterations;
    const Vector g = hst * (ys - hs * x);
    std::vector<Index> sup = support_of(x);
    if (sup.empty()) sup = detail::top_k(g, k);
    Vector gs = Vector::Zero(n);
    for (Index i : sup) gs(i) = g(i);
    const double hg = (hs * gs).squaredNorm();
    double mu = hg > 0.0 ? gs.squaredNorm() / hg : 1.0;
    Vector next = detail::hard_threshold(x + mu * g, k);
    for (int shrink = 0; shrink < 60 && support_of(next) != support_of(x); ++shrink) {
      const Vector d = next - x;
      const double hd = (hs * d).squaredNorm();
      if (hd == 0.0 || mu <= 0.99 * d.squaredNorm() / hd) break;
      mu *= 0.5;
      next = detail::hard_threshold(x + mu * g, k);
    }
    const double res = (ys - hs * next).norm();
    if (res < best_res) {
      best_res = res;
      best = next;
    }
    const double dx = (next - x).norm();
    x = next;
    if (dx <= cfg.convergence_tol * std::max(1.0, x.norm())) {
      r.converged = true;
      break;
    }
  }
  r.x_hat = best;
  r.residual_l2 = (y - h * best).norm();
  r.objective_value = best.lpNorm<1>();
  return r;
}

/// Runs the named solver. Greedy methods read the sparsity from cfg.sparsity_k.
inline RecoveryResult recover(Solver s, const Matrix& h, const Vector& y, const SolverConfig& cfg) {
  cfg.validate();
  switch (s) {
    case Solver::l0_oracle: return l0_oracle(h, y, cfg.sparsity_k);
    case Solver::bp_lp: return bp_lp(h, y);
    case Solver::bp_noisy_l1: return bp_noisy(h, y, cfg.epsilon, ResidualNorm::l1);
    case Solver::bp_noisy_linf: return bp_noisy(h, y, cfg.epsilon, ResidualNorm::linf);
    case Solver::bpdn: return bpdn(h, y, cfg.epsilon, cfg);
    case Solver::lasso: return lasso(h, y, cfg.lambda, cfg);
    case Solver::dantzig: return dantzig(h, y, cfg.epsilon);
    case Solver::omp: return omp(h, y, cfg.sparsity_k, cfg);
    case Solver::cosamp: return cosamp(h, y, cfg.sparsity_k, cfg);
    case Solver::iht: return iht(h, y, cfg.sparsity_k, cfg);
  }
  throw ArgumentError("unknown solver");
}

}  // namespace hse
