// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "hse/errors.hpp"

namespace hse {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Relative singular-value cutoff used for every rank and dependence test.
inline constexpr double kRankTolerance = 1e-10;

/// Numerical rank: singular values above tol times the largest one.
template <typename Derived>
Index numerical_rank(const Eigen::MatrixBase<Derived>& m, double tol = kRankTolerance) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  using Plain = typename Derived::PlainObject;
  Eigen::JacobiSVD<Plain> svd(m.derived());
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0)) ++r;
  return r;
}

/// Minimum-norm least-squares solution via complete orthogonal decomposition.
/// `rank_deficient` is set when the columns are numerically dependent.
template <typename Derived, typename Rhs>
typename Derived::PlainObject::ColXpr::PlainObject least_squares(
    const Eigen::MatrixBase<Derived>& a, const Eigen::MatrixBase<Rhs>& b,
    bool* rank_deficient = nullptr) {
  using Plain = typename Derived::PlainObject;
  Eigen::CompleteOrthogonalDecomposition<Plain> cod(a.derived());
  cod.setThreshold(kRankTolerance);
  if (rank_deficient) *rank_deficient = cod.rank() < a.cols();
  return cod.solve(b.derived());
}

/// Largest singular value (spectral norm).
template <typename Derived>
double spectral_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  using Plain = typename Derived::PlainObject;
  Eigen::BDCSVD<Plain> svd(m.derived());
  return svd.singularValues()(0);
}

/// Number of k-subsets of n, saturating at `cap` to avoid overflow.
inline std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k,
                                     std::uint64_t cap = UINT64_MAX / 4) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double acc = 1.0L;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (acc > static_cast<long double>(cap)) return cap;
  }
  return static_cast<std::uint64_t>(std::llround(static_cast<double>(acc)));
}

/// Visits every size-k subset of {0..n-1} in lexicographic order; stops
/// early when `fn` returns false. Returns false if stopped early.
template <typename Fn>
bool for_each_subset(Index n, Index k, Fn&& fn) {
  if (k < 0 || k > n) return true;
  std::vector<Index> idx(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    if (!fn(static_cast<const std::vector<Index>&>(idx))) return false;
    Index i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return true;
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

template <typename Derived>
typename Derived::PlainObject select_columns(const Eigen::MatrixBase<Derived>& m,
                                             const std::vector<Index>& cols) {
  typename Derived::PlainObject out(m.rows(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Index>(j)) = m.col(cols[j]);
  return out;
}

template <typename Derived>
typename Derived::PlainObject select_rows(const Eigen::MatrixBase<Derived>& m,
                                          const std::vector<Index>& rows) {
  typename Derived::PlainObject out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = m.row(rows[i]);
  return out;
}

}  // namespace hse
