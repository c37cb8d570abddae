// SPDX-License-Identifier: Apache-2.0
//
// End-to-end study: case -> per-order models -> candidate rows -> GA design ->
// injection scenario -> (corrupted) measurements -> recovery -> evaluation.
//
// Seeds: every stage seed derives from ExperimentSpec::seed through
// derive_seed(seed, label) with labels "design", "scenario" and "corruption".
#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hse/estimation.hpp"
#include "hse/io.hpp"
#include "hse/measurement.hpp"
#include "hse/network.hpp"
#include "hse/recovery.hpp"
#include "hse/sensing_design.hpp"

namespace hse {

inline std::vector<int> default_orders() { return {3, 5, 7, 9, 11, 13, 15, 17, 19, 21, 23}; }

struct ExperimentSpec {
  std::string case_path;
  std::vector<int> orders = default_orders();
  int k = 30;
  Index m = 60;
  double magnitude_mean = 0.2;  ///< at the 3rd harmonic, scaled by 3/h
  double magnitude_std = 0.05;
  std::optional<CorruptionSpec> corruption;
  std::optional<Solver> solver;  ///< default: bp_lp noise-free, bpdn corrupted
  SolverConfig solver_config;
  GaParams ga;                   ///< rng_seed is overwritten from `seed`
  std::string design_path;       ///< reuse a stored design instead of running the GA
  std::uint64_t seed = 1;
  std::optional<double> support_threshold;
  std::string output_dir;        ///< empty: no artifacts written

  Solver effective_solver() const {
    return solver.value_or(corruption ? Solver::bpdn : Solver::bp_lp);
  }

  void validate() const {
    if (orders.empty()) throw ArgumentError("at least one harmonic order is required");
    for (int h : orders) check_harmonic_order(h);
    if (k < 0) throw ArgumentError("k must be >= 0");
    if (m < 1) throw ArgumentError("m must be >= 1");
    if (!(magnitude_mean > 0.0) || !(magnitude_std >= 0.0))
      throw ArgumentError("injection magnitude parameters must be positive");
    if (corruption) corruption->validate();
    solver_config.validate();
    ga.validate();
  }
};

struct ExperimentOutcome {
  NetworkCase network;
  std::vector<HarmonicOrderModel> models;
  std::vector<CandidateMatrix> candidates;
  SensingDesign design;
  InjectionScenario scenario;
  std::vector<MeasurementSet> measurements;
  std::vector<Matrix> recovery_matrices;
  HseEstimate estimate;
  TruthState truth;
  EvaluationReport report;
  std::vector<double> thresholds;
};

/// Builds per-order models and candidate matrices.
inline void build_order_data(const NetworkCase& network, const std::vector<int>& orders,
                             std::vector<HarmonicOrderModel>& models,
                             std::vector<CandidateMatrix>& candidates) {
  models.clear();
  candidates.clear();
  for (int h : orders) {
    models.push_back(build_harmonic_model(network, h));
    candidates.push_back(build_candidate_matrix(models.back()));
  }
}

/// Matrices handed to the solver: the design's own, or a corrupted copy drawn
/// once per order (lane = order).
inline std::vector<Matrix> recovery_matrices(const SensingDesign& design,
                                             const CorruptionSpec* corruption) {
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < design.orders.size(); ++i)
    out.push_back(corruption ? corrupt_matrix(design.per_order_H[i], *corruption,
                                              static_cast<std::uint64_t>(design.orders[i]))
                             : design.per_order_H[i]);
  return out;
}

/// Per-order support thresholds: `fixed` when given; otherwise 3x the
/// background std times the largest source magnitude in corrupted runs, and
/// kDefaultSupportThreshold noise-free.
inline std::vector<double> support_thresholds(const InjectionScenario& scenario,
                                              const CorruptionSpec* corruption,
                                              std::optional<double> fixed) {
  std::vector<double> out;
  for (std::size_t i = 0; i < scenario.orders.size(); ++i) {
    double t = kDefaultSupportThreshold;
    if (fixed) {
      t = *fixed;
    } else if (corruption && corruption->background_injection_std > 0.0 &&
               !scenario.support.empty()) {
      double largest = 0.0;
      for (Index b : scenario.support) largest = std::max(largest, std::abs(scenario.injections[i](b)));
      t = 3.0 * corruption->background_injection_std * largest;
    }
    out.push_back(t);
  }
  return out;
}

namespace detail {

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace detail

inline ExperimentOutcome run_experiment(const ExperimentSpec& spec) {
  detail::stage("spec", [&] {
    spec.validate();
    return 0;
  });
  ExperimentOutcome out;
  out.network = detail::stage("load", [&] { return load_case(spec.case_path); });
  detail::stage("model", [&] {
    build_order_data(out.network, spec.orders, out.models, out.candidates);
    return 0;
  });

  out.design = detail::stage("design", [&] {
    if (!spec.design_path.empty()) {
      SensingDesign d = design_from_json(read_json_file(spec.design_path), out.candidates, out.network);
      if (d.sparsity_k != spec.k)
        throw ArgumentError("stored design was built for k = " + std::to_string(d.sparsity_k));
      return d;
    }
    GaParams ga = spec.ga;
    ga.rng_seed = derive_seed(spec.seed, "design");
    return ga_select_rows(out.candidates, out.network, spec.m, spec.k, ga);
  });

  std::optional<CorruptionSpec> corruption = spec.corruption;
  if (corruption) corruption->rng_seed = derive_seed(spec.seed, "corruption");
  const CorruptionSpec* cp = corruption ? &*corruption : nullptr;

  out.scenario = detail::stage("scenario", [&] {
    InjectionParams p;
    p.bus_count = out.network.bus_count();
    p.sparsity = spec.k;
    p.orders = spec.orders;
    p.magnitude_mean = spec.magnitude_mean;
    p.magnitude_std = spec.magnitude_std;
    return make_injection_scenario(p, cp, derive_seed(spec.seed, "scenario"));
  });

  detail::stage("measure", [&] {
    for (std::size_t i = 0; i < spec.orders.size(); ++i) {
      out.measurements.push_back(simulate_measurements(out.candidates[i], out.design.selected_rows,
                                                       out.scenario.injections[i], cp));
    }
    out.recovery_matrices = recovery_matrices(out.design, cp);
    return 0;
  });

  out.thresholds = support_thresholds(out.scenario, cp, spec.support_threshold);

  out.estimate = detail::stage("estimate", [&] {
    SolverConfig cfg = spec.solver_config;
    if (cfg.sparsity_k == 0) cfg.sparsity_k = 2 * spec.k;
    HseEstimate e = estimate(out.recovery_matrices, out.measurements, out.models,
                             spec.effective_solver(), cfg);
    for (std::size_t i = 0; i < e.per_order.size(); ++i)
      e.per_order[i].support = support_of(e.per_order[i].injections, out.thresholds[i]);
    return e;
  });

  out.truth = make_truth(out.scenario, out.models);
  out.report = detail::stage("evaluate", [&] { return evaluate(out.truth, out.estimate, out.thresholds); });

  if (!spec.output_dir.empty()) {
    detail::stage("write", [&] {
      const std::filesystem::path dir(spec.output_dir);
      std::filesystem::create_directories(dir);
      GaParams ga = spec.ga;
      ga.rng_seed = derive_seed(spec.seed, "design");
      write_json_file(dir / "design.json", to_json(out.design, spec.design_path.empty() ? &ga : nullptr));
      write_json_file(dir / "scenario.json",
                      to_json(out.scenario, out.network, derive_seed(spec.seed, "scenario")));
      write_json_file(dir / "measurements.json", to_json(out.measurements, cp));
      write_json_file(dir / "estimate.json", to_json(out.estimate, out.network));
      json report = to_json(out.report, out.network);
      report["experiment"] = {{"seed", spec.seed},
                              {"k", spec.k},
                              {"m", out.design.row_count()},
                              {"orders", spec.orders},
                              {"solver", std::string(to_string(spec.effective_solver()))},
                              {"epsilon", spec.solver_config.epsilon},
                              {"corrupted", cp != nullptr},
                              {"matrix_corruption", cp ? "once per order" : "none"}};
      write_json_file(dir / "report.json", report);
      write_text_file(dir / "report.csv", report_csv(out.truth, out.estimate, out.network));
      return 0;
    });
  }
  return out;
}

}  // namespace hse
