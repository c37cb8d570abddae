// SPDX-License-Identifier: Apache-2.0
//
// Compressive-sensing matrix properties: mutual coherence, spark, null-space
// property and restricted isometry constants. Spark, NSP and RIP are
// combinatorial and only meant for small matrices.
#pragma once

#include <limits>
#include <optional>
#include <random>

#include "hse/linalg.hpp"
#include "hse/rng.hpp"

namespace hse {

/// Enumeration budget shared by every exhaustive search.
inline constexpr std::uint64_t kMaxSubsets = 10'000'000;

/// max_{i != j} |<H_i, H_j>| / (|H_i| |H_j|)
template <typename Derived>
double coherence(const Eigen::MatrixBase<Derived>& h) {
  if (h.cols() < 2) throw ArgumentError("coherence needs at least two columns");
  using Plain = typename Derived::PlainObject;
  Plain n = h;
  for (Index j = 0; j < n.cols(); ++j) {
    const double norm = n.col(j).norm();
    if (norm == 0.0) throw ArgumentError("column " + std::to_string(j) + " is zero");
    n.col(j) /= norm;
  }
  const Plain g = n.adjoint() * n;
  double mu = 0.0;
  for (Index j = 0; j < g.cols(); ++j)
    for (Index i = 0; i < j; ++i) mu = std::max(mu, std::abs(g(i, j)));
  return std::min(mu, 1.0);
}

/// Smallest number of linearly dependent columns, searched up to max_cols.
/// Empty when every subset of size <= max_cols is independent.
template <typename Derived>
std::optional<int> spark_exact(const Eigen::MatrixBase<Derived>& h, int max_cols) {
  const Index n = h.cols();
  const Index top = std::min<Index>(max_cols, n);
  if (top >= 1 &&
      binomial_capped(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(top)) > kMaxSubsets)
    throw ComplexityError("spark search over C(" + std::to_string(n) + ", " +
                          std::to_string(top) + ") subsets exceeds the enumeration budget");
  const double scale = h.size() ? h.cwiseAbs().maxCoeff() : 0.0;
  for (Index s = 1; s <= top; ++s) {
    bool dependent = false;
    for_each_subset(n, s, [&](const std::vector<Index>& cols) {
      const auto sub = select_columns(h, cols);
      if (s == 1) {
        dependent = sub.norm() <= kRankTolerance * std::max(scale, 1e-300);
      } else {
        dependent = numerical_rank(sub) < s;
      }
      return !dependent;
    });
    if (dependent) return static_cast<int>(s);
  }
  return std::nullopt;
}

/// 1 + 1/coherence; +infinity for orthogonal columns.
template <typename Derived>
double spark_lower_bound(const Eigen::MatrixBase<Derived>& h) {
  const double mu = coherence(h);
  if (mu == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 + 1.0 / mu;
}

/// Orthonormal basis of the numerical null space (columns).
inline Matrix null_space(const Matrix& h) {
  const Index n = h.cols();
  if (h.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(h, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Index rank = 0;
  if (s.size() > 0 && s(0) > 0.0)
    for (Index i = 0; i < s.size(); ++i)
      if (s(i) > kRankTolerance * s(0)) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

struct NspOptions {
  int samples = 10'000;
  std::uint64_t seed = 0x5eed;
};

/// Smallest C with |v_S|_1 <= C |v_{S^c}|_1 for every null-space direction v and
/// every |S| = k. The worst support for a given v is its k largest entries, so
/// only directions are sampled: the basis vectors plus `samples` random unit
/// combinations. Exact when the null space is one-dimensional, a lower estimate
/// otherwise.
inline double nsp_coefficient(const Matrix& h, int k, const NspOptions& opt = {}) {
  if (k < 0 || k > h.cols()) throw ArgumentError("NSP order k out of range");
  const Matrix basis = null_space(h);
  if (basis.cols() == 0 || k == 0) return 0.0;

  auto ratio = [k](const Vector& v) {
    Vector a = v.cwiseAbs();
    std::sort(a.data(), a.data() + a.size(), std::greater<>());
    const double inside = a.head(k).sum();
    const double outside = a.tail(a.size() - k).sum();
    if (outside <= 1e-14 * std::max(inside, 1e-300))
      return inside > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    return inside / outside;
  };

  double worst = 0.0;
  for (Index j = 0; j < basis.cols(); ++j) worst = std::max(worst, ratio(basis.col(j)));
  if (basis.cols() > 1) {
    Rng rng(opt.seed);
    std::normal_distribution<double> n01(0.0, 1.0);
    Vector c(basis.cols());
    for (int s = 0; s < opt.samples; ++s) {
      for (Index j = 0; j < c.size(); ++j) c(j) = n01(rng);
      worst = std::max(worst, ratio(basis * c.normalized()));
    }
  }
  return worst;
}

/// delta_k over all size-k column subsets of the column-normalized matrix.
template <typename Derived>
double rip_constant(const Eigen::MatrixBase<Derived>& h, int k) {
  if (k < 1 || k > h.cols())
    throw ArgumentError("RIP order k = " + std::to_string(k) + " is outside [1, " +
                        std::to_string(h.cols()) + "]");
  if (binomial_capped(static_cast<std::uint64_t>(h.cols()), static_cast<std::uint64_t>(k)) >
      kMaxSubsets)
    throw ComplexityError("RIP enumeration exceeds the subset budget");
  using Plain = typename Derived::PlainObject;
  Plain n = h;
  for (Index j = 0; j < n.cols(); ++j) {
    const double norm = n.col(j).norm();
    if (norm == 0.0) throw ArgumentError("column " + std::to_string(j) + " is zero");
    n.col(j) /= norm;
  }
  double delta = 0.0;
  for_each_subset(n.cols(), k, [&](const std::vector<Index>& cols) {
    const Plain sub = select_columns(n, cols);
    const Plain g = sub.adjoint() * sub;
    Eigen::SelfAdjointEigenSolver<Plain> eig(g, Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    delta = std::max({delta, std::abs(ev(ev.size() - 1) - 1.0), std::abs(1.0 - ev(0))});
    return true;
  });
  return delta;
}

struct MatrixDiagnostics {
  double coherence = 0.0;
  double spark_lower_bound = 0.0;
  std::optional<int> spark_exact;
  Index rank = 0;
};

/// Coherence, spark bound and rank; the exact spark only when the search fits
/// within the enumeration budget.
template <typename Derived>
MatrixDiagnostics diagnose(const Eigen::MatrixBase<Derived>& h, int spark_max_cols = 0) {
  MatrixDiagnostics d;
  d.coherence = coherence(h);
  d.spark_lower_bound =
      d.coherence > 0.0 ? 1.0 + 1.0 / d.coherence : std::numeric_limits<double>::infinity();
  d.rank = numerical_rank(h);
  if (spark_max_cols > 0) {
    try {
      d.spark_exact = spark_exact(h, spark_max_cols);
    } catch (const ComplexityError&) {
    }
  }
  return d;
}

}  // namespace hse
