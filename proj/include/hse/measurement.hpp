// SPDX-License-Identifier: Apache-2.0
//
// Candidate measurement rows, real/imaginary stacking, and seeded simulation of
// harmonic injections and (optionally corrupted) measurements.
#pragma once

#include <algorithm>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "hse/linalg.hpp"
#include "hse/network.hpp"
#include "hse/rng.hpp"

namespace hse {

struct VoltageAt {
  Index bus = 0;
  bool operator==(const VoltageAt&) const = default;
};

/// Current leaving `from` on branch `branch`, oriented from -> to.
struct CurrentOn {
  Index branch = 0;
  Index from = 0;
  Index to = 0;
  bool operator==(const CurrentOn&) const = default;
};

using RowTag = std::variant<VoltageAt, CurrentOn>;

inline bool is_voltage(const RowTag& t) noexcept { return std::holds_alternative<VoltageAt>(t); }

struct CandidateMatrix {
  int order = 1;
  CMatrix rows;  ///< (N_b + N_l) x N_b
  std::vector<RowTag> row_tags;

  Index row_count() const noexcept { return rows.rows(); }
};

/// First N_b rows are rows of Z^h (bus voltages); the remaining N_l rows give
/// the from-end current of each branch:
///   y (Z_i - Z_j) + y_sh Z_i          for tap = 1
///   (y/t^2 + y_sh) Z_i - (y/t) Z_j    for an off-nominal tap t
inline CandidateMatrix build_candidate_matrix(const HarmonicOrderModel& model) {
  const Index nb = model.bus_count();
  const Index nl = static_cast<Index>(model.branch_admittances.size());
  CandidateMatrix c;
  c.order = model.order;
  c.rows.resize(nb + nl, nb);
  c.rows.topRows(nb) = model.zbus;
  c.row_tags.reserve(static_cast<std::size_t>(nb + nl));
  for (Index i = 0; i < nb; ++i) c.row_tags.emplace_back(VoltageAt{i});
  for (Index k = 0; k < nl; ++k) {
    const auto& ba = model.branch_admittances[static_cast<std::size_t>(k)];
    const double t = ba.tap;
    c.rows.row(nb + k) = (ba.series / (t * t) + ba.half_shunt) * model.zbus.row(ba.from) -
                         (ba.series / t) * model.zbus.row(ba.to);
    c.row_tags.emplace_back(CurrentOn{k, ba.from, ba.to});
  }
  return c;
}

/// [[Re, -Im], [Im, Re]]
inline Matrix stack_real(const CMatrix& m) {
  const Index r = m.rows(), c = m.cols();
  Matrix out(2 * r, 2 * c);
  out.topLeftCorner(r, c) = m.real();
  out.topRightCorner(r, c) = -m.imag();
  out.bottomLeftCorner(r, c) = m.imag();
  out.bottomRightCorner(r, c) = m.real();
  return out;
}

/// [Re; Im]
inline Vector stack_real(const CVector& v) {
  Vector out(2 * v.size());
  out.head(v.size()) = v.real();
  out.tail(v.size()) = v.imag();
  return out;
}

inline CVector unstack(const Vector& v) {
  if (v.size() % 2 != 0)
    throw ArgumentError("unstack needs an even-length vector, got length " +
                        std::to_string(v.size()));
  const Index n = v.size() / 2;
  CVector out(n);
  for (Index i = 0; i < n; ++i) out(i) = cplx(v(i), v(n + i));
  return out;
}

struct CorruptionSpec {
  double measurement_noise_std = 0.05;
  double matrix_error_std = 0.05;
  double background_injection_std = 0.05;
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (!(measurement_noise_std >= 0.0) || !(matrix_error_std >= 0.0) ||
        !(background_injection_std >= 0.0))
      throw ArgumentError("corruption fractions must be non-negative");
  }
};

struct MeasurementSet {
  int order = 1;
  CVector values;
  std::vector<Index> rows;  ///< candidate rows the values belong to
  std::vector<RowTag> tags;

  Vector stacked() const { return stack_real(values); }
};

inline double rms(const CVector& v) {
  return v.size() == 0 ? 0.0 : std::sqrt(v.squaredNorm() / static_cast<double>(v.size()));
}

inline double rms(const Matrix& m) {
  return m.size() == 0 ? 0.0 : std::sqrt(m.squaredNorm() / static_cast<double>(m.size()));
}

/// Selected candidate rows times the injections. With corruption, independent
/// Gaussian noise of std (measurement_noise_std * RMS|y|) is added to the real
/// and imaginary part of every value.
inline MeasurementSet simulate_measurements(const CandidateMatrix& candidates,
                                            const std::vector<Index>& rows,
                                            const CVector& injections,
                                            const CorruptionSpec* corruption = nullptr) {
  if (injections.size() != candidates.rows.cols())
    throw ArgumentError("injection vector has length " + std::to_string(injections.size()) +
                        ", expected " + std::to_string(candidates.rows.cols()));
  for (Index r : rows)
    if (r < 0 || r >= candidates.row_count())
      throw ArgumentError("design row " + std::to_string(r) + " is outside the candidate matrix");
  MeasurementSet out;
  out.order = candidates.order;
  out.rows = rows;
  out.values = select_rows(candidates.rows, rows) * injections;
  for (Index r : rows) out.tags.push_back(candidates.row_tags[static_cast<std::size_t>(r)]);
  if (corruption) {
    corruption->validate();
    const double sigma = corruption->measurement_noise_std * rms(out.values);
    Rng rng(derive_seed(corruption->rng_seed, "measurement-noise",
                        static_cast<std::uint64_t>(candidates.order)));
    std::normal_distribution<double> n01(0.0, 1.0);
    for (Index i = 0; i < out.values.size(); ++i) {
      const double re = n01(rng), im = n01(rng);
      out.values(i) += sigma * cplx(re, im);
    }
  }
  return out;
}

/// Adds Gaussian noise with std (matrix_error_std * RMS of all elements) to
/// every element. `lane` separates streams, e.g. per harmonic order.
inline Matrix corrupt_matrix(const Matrix& h, const CorruptionSpec& corruption,
                             std::uint64_t lane = 0) {
  corruption.validate();
  if (corruption.matrix_error_std == 0.0) return h;
  const double sigma = corruption.matrix_error_std * rms(h);
  Rng rng(derive_seed(corruption.rng_seed, "matrix-error", lane));
  std::normal_distribution<double> n01(0.0, 1.0);
  Matrix out = h;
  for (Index j = 0; j < out.cols(); ++j)
    for (Index i = 0; i < out.rows(); ++i) out(i, j) += sigma * n01(rng);
  return out;
}

struct InjectionScenario {
  std::vector<int> orders;
  std::vector<CVector> injections;  ///< one per order, aligned with `orders`
  std::vector<Index> support;       ///< sorted bus positions of the harmonic sources

  const CVector& at_order(int h) const {
    for (std::size_t i = 0; i < orders.size(); ++i)
      if (orders[i] == h) return injections[i];
    throw ArgumentError("scenario has no order " + std::to_string(h));
  }
};

/// Magnitudes are drawn from N(mean, std) (floored at 1% of the mean), then
/// scaled by 3/h; phases are uniform on [0, 2pi). The source buses are shared
/// by all orders.
struct InjectionParams {
  Index bus_count = 0;
  Index sparsity = 0;
  std::vector<int> orders;
  double magnitude_mean = 0.2;
  double magnitude_std = 0.05;
  int reference_order = 3;
};

inline InjectionScenario make_injection_scenario(const InjectionParams& p,
                                                 const CorruptionSpec* corruption,
                                                 std::uint64_t seed) {
  if (p.sparsity < 0 || p.sparsity > p.bus_count)
    throw ArgumentError("sparsity k = " + std::to_string(p.sparsity) + " exceeds bus count " +
                        std::to_string(p.bus_count));
  if (p.orders.empty()) throw ArgumentError("at least one harmonic order is required");
  for (int h : p.orders) check_harmonic_order(h);
  if (corruption) corruption->validate();

  InjectionScenario s;
  s.orders = p.orders;
  {
    Rng rng(derive_seed(seed, "support"));
    std::vector<Index> all(static_cast<std::size_t>(p.bus_count));
    for (Index i = 0; i < p.bus_count; ++i) all[static_cast<std::size_t>(i)] = i;
    // Partial Fisher-Yates: the first k entries are a uniform k-subset.
    for (Index i = 0; i < p.sparsity; ++i) {
      std::uniform_int_distribution<Index> pick(i, p.bus_count - 1);
      std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(pick(rng))]);
    }
    s.support.assign(all.begin(), all.begin() + p.sparsity);
    std::sort(s.support.begin(), s.support.end());
  }
  std::vector<bool> is_source(static_cast<std::size_t>(p.bus_count), false);
  for (Index b : s.support) is_source[static_cast<std::size_t>(b)] = true;

  const double two_pi = 2.0 * std::numbers::pi;
  for (int h : p.orders) {
    Rng rng(derive_seed(seed, "injection", static_cast<std::uint64_t>(h)));
    std::normal_distribution<double> mag(p.magnitude_mean, p.magnitude_std);
    std::uniform_real_distribution<double> phase(0.0, two_pi);
    const double scale = static_cast<double>(p.reference_order) / static_cast<double>(h);
    CVector x = CVector::Zero(p.bus_count);
    double largest = 0.0;
    for (Index b : s.support) {
      const double m = std::max(mag(rng), 0.01 * p.magnitude_mean) * scale;
      x(b) = std::polar(m, phase(rng));
      largest = std::max(largest, m);
    }
    if (corruption && corruption->background_injection_std > 0.0 && p.sparsity > 0) {
      Rng bg(derive_seed(corruption->rng_seed ^ seed, "background", static_cast<std::uint64_t>(h)));
      std::normal_distribution<double> n01(0.0, 1.0);
      const double sigma = corruption->background_injection_std * largest;
      for (Index b = 0; b < p.bus_count; ++b) {
        if (is_source[static_cast<std::size_t>(b)]) continue;
        double m = std::abs(sigma * n01(bg));
        if (m == 0.0) m = sigma * 1e-12;
        x(b) = std::polar(m, phase(bg));
      }
    }
    s.injections.push_back(std::move(x));
  }
  return s;
}

}  // namespace hse
