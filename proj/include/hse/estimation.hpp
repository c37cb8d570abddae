// SPDX-License-Identifier: Apache-2.0
//
// Per-order harmonic state estimation: recover the sparse injection vector of
// each order from its measurements, then rebuild bus voltages as V = Z X.
#pragma once

#include <string>
#include <vector>

#include "hse/measurement.hpp"
#include "hse/network.hpp"
#include "hse/recovery.hpp"
#include "hse/sensing_design.hpp"

namespace hse {

inline constexpr double kDefaultSupportThreshold = 1e-6;

inline CVector reconstruct_voltages(const HarmonicOrderModel& model, const CVector& x) {
  if (x.size() != model.bus_count())
    throw ArgumentError("injection vector has length " + std::to_string(x.size()) + ", model has " +
                        std::to_string(model.bus_count()) + " buses");
  return model.zbus * x;
}

inline std::vector<Index> support_of(const CVector& x, double threshold) {
  std::vector<Index> s;
  for (Index i = 0; i < x.size(); ++i)
    if (std::abs(x(i)) >= threshold && std::abs(x(i)) > 0.0) s.push_back(i);
  return s;
}

struct OrderEstimate {
  int order = 1;
  CVector injections;
  CVector voltages;
  std::vector<Index> support;
  RecoveryResult diagnostics;
  bool failed = false;
  std::string failure;
};

struct HseEstimate {
  std::vector<OrderEstimate> per_order;

  const OrderEstimate& at(int h) const {
    for (const auto& e : per_order)
      if (e.order == h) return e;
    throw ArgumentError("estimate has no order " + std::to_string(h));
  }
};

/// Recovers every order independently. `sensing` holds the stacked real matrix
/// used for recovery at each order (it may differ from the matrix that produced
/// the data). Solver failures are recorded on the order, not thrown.
inline HseEstimate estimate(const std::vector<Matrix>& sensing,
                            const std::vector<MeasurementSet>& measurements,
                            const std::vector<HarmonicOrderModel>& models, Solver solver,
                            const SolverConfig& config,
                            double support_threshold = kDefaultSupportThreshold) {
  if (sensing.size() != measurements.size() || sensing.size() != models.size())
    throw ArgumentError("estimate needs one sensing matrix, measurement set and model per order");
  HseEstimate out;
  for (std::size_t i = 0; i < sensing.size(); ++i) {
    const Matrix& h = sensing[i];
    const MeasurementSet& ms = measurements[i];
    const HarmonicOrderModel& model = models[i];
    if (ms.order != model.order)
      throw ArgumentError("measurement order " + std::to_string(ms.order) +
                          " does not match model order " + std::to_string(model.order));
    if (h.rows() != 2 * ms.values.size() || h.cols() != 2 * model.bus_count())
      throw ArgumentError("order " + std::to_string(model.order) +
                          ": sensing matrix shape does not match measurements and model");
    OrderEstimate e;
    e.order = model.order;
    try {
      e.diagnostics = recover(solver, h, ms.stacked(), config);
      e.injections = unstack(e.diagnostics.x_hat);
    } catch (const Error& err) {
      e.failed = true;
      e.failure = err.what();
      e.injections = CVector::Zero(model.bus_count());
      e.diagnostics.solver = solver;
    }
    e.voltages = reconstruct_voltages(model, e.injections);
    e.support = support_of(e.injections, support_threshold);
    out.per_order.push_back(std::move(e));
  }
  return out;
}

inline HseEstimate estimate(const SensingDesign& design,
                            const std::vector<MeasurementSet>& measurements,
                            const std::vector<HarmonicOrderModel>& models, Solver solver,
                            const SolverConfig& config,
                            double support_threshold = kDefaultSupportThreshold) {
  return estimate(design.per_order_H, measurements, models, solver, config, support_threshold);
}

/// Ground truth for one scenario: injections, voltages and the declared sources.
struct TruthState {
  std::vector<int> orders;
  std::vector<CVector> injections;
  std::vector<CVector> voltages;
  std::vector<Index> support;  ///< declared source buses; empty = derive by threshold
  bool declared_support = false;
};

inline TruthState make_truth(const InjectionScenario& s,
                             const std::vector<HarmonicOrderModel>& models) {
  TruthState t;
  t.orders = s.orders;
  t.injections = s.injections;
  for (std::size_t i = 0; i < s.orders.size(); ++i)
    t.voltages.push_back(reconstruct_voltages(models.at(i), s.injections[i]));
  t.support = s.support;
  t.declared_support = true;
  return t;
}

struct OrderReport {
  int order = 1;
  double support_threshold = 0.0;
  double precision = 1.0;
  double recall = 1.0;
  double max_current_error = 0.0;   ///< max |x_hat - x|
  double mean_current_error = 0.0;
  double max_voltage_error = 0.0;   ///< max ||V_hat| - |V||
  double mean_voltage_error = 0.0;
  std::vector<Index> false_sources;
  std::vector<Index> missed_sources;
  std::size_t true_sources = 0;
  std::size_t estimated_sources = 0;
  bool solver_failed = false;
};

struct EvaluationReport {
  std::vector<OrderReport> per_order;

  double min_precision() const {
    double v = 1.0;
    for (const auto& o : per_order) v = std::min(v, o.precision);
    return v;
  }
  double min_recall() const {
    double v = 1.0;
    for (const auto& o : per_order) v = std::min(v, o.recall);
    return v;
  }
  double max_current_error() const {
    double v = 0.0;
    for (const auto& o : per_order) v = std::max(v, o.max_current_error);
    return v;
  }
  double max_voltage_error() const {
    double v = 0.0;
    for (const auto& o : per_order) v = std::max(v, o.max_voltage_error);
    return v;
  }
};

/// Compares an estimate with the truth. `thresholds` gives the support
/// threshold per order (one value applies to all). Precision and recall are 1
/// when their denominators are empty.
inline EvaluationReport evaluate(const TruthState& truth, const HseEstimate& est,
                                 const std::vector<double>& thresholds) {
  if (truth.orders.size() != est.per_order.size())
    throw ArgumentError("truth and estimate cover different orders");
  if (thresholds.empty()) throw ArgumentError("support threshold missing");
  EvaluationReport rep;
  for (std::size_t i = 0; i < truth.orders.size(); ++i) {
    const int h = truth.orders[i];
    const OrderEstimate& e = est.at(h);
    const CVector& x = truth.injections[i];
    const CVector& v = truth.voltages[i];
    if (e.injections.size() != x.size() || e.voltages.size() != v.size())
      throw ArgumentError("order " + std::to_string(h) + ": dimension mismatch");
    OrderReport o;
    o.order = h;
    o.solver_failed = e.failed;
    o.support_threshold = thresholds.size() == 1 ? thresholds[0] : thresholds.at(i);
    const std::vector<Index> t_sup =
        truth.declared_support ? truth.support : support_of(x, o.support_threshold);
    const std::vector<Index> e_sup = support_of(e.injections, o.support_threshold);
    std::vector<bool> in_truth(static_cast<std::size_t>(x.size()), false);
    std::vector<bool> in_est(static_cast<std::size_t>(x.size()), false);
    for (Index b : t_sup) in_truth[static_cast<std::size_t>(b)] = true;
    for (Index b : e_sup) in_est[static_cast<std::size_t>(b)] = true;
    std::size_t hit = 0;
    for (Index b : e_sup) {
      if (in_truth[static_cast<std::size_t>(b)]) ++hit;
      else o.false_sources.push_back(b);
    }
    for (Index b : t_sup)
      if (!in_est[static_cast<std::size_t>(b)]) o.missed_sources.push_back(b);
    o.true_sources = t_sup.size();
    o.estimated_sources = e_sup.size();
    o.precision = e_sup.empty() ? 1.0 : static_cast<double>(hit) / static_cast<double>(e_sup.size());
    o.recall = t_sup.empty() ? 1.0 : static_cast<double>(hit) / static_cast<double>(t_sup.size());
    const Vector ci = (e.injections - x).cwiseAbs();
    const Vector vi = (e.voltages.cwiseAbs() - v.cwiseAbs()).cwiseAbs();
    if (x.size() > 0) {
      o.max_current_error = ci.maxCoeff();
      o.mean_current_error = ci.mean();
      o.max_voltage_error = vi.maxCoeff();
      o.mean_voltage_error = vi.mean();
    }
    rep.per_order.push_back(std::move(o));
  }
  return rep;
}

}  // namespace hse
