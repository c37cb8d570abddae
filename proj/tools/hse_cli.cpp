// SPDX-License-Identifier: Apache-2.0
//
// hse_cli: command-line front end for the harmonic state estimation pipeline.
//
//   validate CASE                      case summary
//   design   CASE --k --m ...          design.json
//   simulate CASE --design ...         scenario.json, measurements.json
//   recover  CASE --design --measurements ...   estimate.json
//   report   CASE --scenario --estimate ...     report.json, report.csv
//   run      CASE ...                  all of the above in one pass
//
// Exit codes: 0 ok, 2 invalid input or arguments, 3 I/O, 4 pipeline stage.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hse/hse.hpp"

namespace {

using namespace hse;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;
constexpr int kExitStage = 4;

std::string default_output_dir() {
  if (const char* env = std::getenv("HSE_OUTPUT_DIR"); env && *env) return env;
  return "hse_out";
}

struct CorruptionFlags {
  bool noise_free = false;
  std::optional<double> all;
  std::optional<double> noise, matrix, background;

  void add(CLI::App* app) {
    app->add_flag("--noise-free", noise_free, "no corruption (default)");
    app->add_option("--corrupt", all, "set all three corruption fractions")->check(CLI::NonNegativeNumber);
    app->add_option("--noise-std", noise, "measurement noise, fraction of RMS |y|");
    app->add_option("--matrix-std", matrix, "matrix error, fraction of RMS |H|");
    app->add_option("--background-std", background, "background injections, fraction of the largest source");
  }

  std::optional<CorruptionSpec> spec() const {
    if (noise_free && (all || noise || matrix || background))
      throw ArgumentError("--noise-free conflicts with corruption flags");
    if (!all && !noise && !matrix && !background) return std::nullopt;
    CorruptionSpec c;
    const double base = all.value_or(0.0);
    c.measurement_noise_std = noise.value_or(base);
    c.matrix_error_std = matrix.value_or(base);
    c.background_injection_std = background.value_or(base);
    c.validate();
    return c;
  }
};

struct GaFlags {
  GaParams p;
  void add(CLI::App* app) {
    app->add_option("--population", p.population_size, "GA population size");
    app->add_option("--generations", p.generations, "GA generations");
    app->add_option("--crossover-rate", p.crossover_rate, "GA crossover probability");
    app->add_option("--mutation-rate", p.mutation_rate, "GA per-gene mutation probability");
    app->add_option("--elitism", p.elitism_count, "GA elite count");
  }
};

struct SolverFlags {
  std::string solver;
  SolverConfig cfg;
  std::optional<double> threshold;
  void add(CLI::App* app) {
    app->add_option("--solver", solver,
                    "l0_oracle, bp_lp, bp_noisy_l1, bp_noisy_linf, bpdn, lasso, dantzig, omp, "
                    "cosamp, iht");
    app->add_option("--epsilon", cfg.epsilon, "noise bound for bpdn, bp_noisy, dantzig");
    app->add_option("--lambda", cfg.lambda, "LASSO penalty");
    app->add_option("--max-iterations", cfg.max_iterations, "iteration cap for iterative solvers");
    app->add_option("--sparsity", cfg.sparsity_k, "sparsity for omp/cosamp/iht (default 2k)");
    app->add_option("--threshold", threshold, "support threshold (default: derived)");
  }
};

std::vector<int> parse_orders(const std::vector<int>& given) {
  return given.empty() ? default_orders() : given;
}

void print_case_summary(const NetworkCase& c) {
  std::cout << c.bus_count() << " buses, " << c.line_count() << " lines, " << c.transformer_count()
            << " transformers, " << c.generators.size() << " generators\n";
}

void print_design(const SensingDesign& d) {
  std::printf("objective %.6f\n", d.objective);
  std::printf("placements %zu: %zu voltage, %zu current, %zu devices\n", d.monitors.size(),
              count_kind(d.monitors, PlacementKind::voltage),
              count_kind(d.monitors, PlacementKind::current), device_count(d.monitors));
  std::printf("full rank %s, spark certified (1 + 1/mu > 2k) %s\n", d.full_rank ? "yes" : "no",
              d.spark_certified ? "yes" : "no");
}

void print_report(const EvaluationReport& r) {
  std::printf("%5s %9s %9s %12s %12s %s\n", "order", "precision", "recall", "max|dI|", "max|dV|",
              "status");
  for (const auto& o : r.per_order)
    std::printf("%5d %9.4f %9.4f %12.4e %12.4e %s\n", o.order, o.precision, o.recall,
                o.max_current_error, o.max_voltage_error, o.solver_failed ? "solver failed" : "ok");
  std::printf("summary: min precision %.4f, min recall %.4f, max current error %.4e, "
              "max voltage error %.4e\n",
              r.min_precision(), r.min_recall(), r.max_current_error(), r.max_voltage_error());
}

/// Loads a stored design and the per-order data it refers to.
SensingDesign load_design(const std::string& path, const NetworkCase& network,
                          std::vector<HarmonicOrderModel>& models,
                          std::vector<CandidateMatrix>& candidates) {
  const json j = read_json_file(path);
  if (!j.contains("orders")) throw FormatError("design JSON lacks 'orders'");
  build_order_data(network, j["orders"].get<std::vector<int>>(), models, candidates);
  return design_from_json(j, candidates, network);
}

std::optional<CorruptionSpec> corruption_of(const json& measurements) {
  if (!measurements.contains("corruption") || measurements["corruption"].is_null()) return std::nullopt;
  return corruption_from_json(measurements["corruption"]);
}

std::filesystem::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoError("cannot create output directory '" + dir + "'");
  return dir;
}

int report_error(const std::exception& e, int code) {
  std::cerr << "error: " << e.what() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic state estimation by sparse recovery"};
  app.require_subcommand(1);
  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "more output");

  std::string case_path;
  std::string out_dir = default_output_dir();
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("case", case_path, "network case (JSON)")->required();
  };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "output directory (default $HSE_OUTPUT_DIR or hse_out)");
  };

  int k = 30;
  std::optional<Index> m;
  std::vector<int> orders;
  std::uint64_t seed = 1;
  double mag_mean = 0.2, mag_std = 0.05;
  std::string design_path, measurements_path, scenario_path, estimate_path;
  CorruptionFlags corruption;
  GaFlags ga;
  SolverFlags solver;

  auto* validate = app.add_subcommand("validate", "check a case file and print its summary");
  add_common(validate);

  auto* design = app.add_subcommand("design", "choose monitor rows with the genetic search");
  add_common(design);
  add_out(design);
  design->add_option("--k", k, "sparsity level the design must support");
  design->add_option("--m", m, "number of monitor channels (default min(60, candidates))");
  design->add_option("--orders", orders, "harmonic orders (default 3,5,...,23)")->delimiter(',');
  design->add_option("--seed", seed, "master seed");
  ga.add(design);

  auto* simulate = app.add_subcommand("simulate", "draw a scenario and its measurements");
  add_common(simulate);
  add_out(simulate);
  simulate->add_option("--design", design_path, "design.json")->required();
  simulate->add_option("--k", k, "number of harmonic sources");
  simulate->add_option("--seed", seed, "master seed");
  simulate->add_option("--magnitude-mean", mag_mean, "mean source magnitude at order 3 (p.u.)");
  simulate->add_option("--magnitude-std", mag_std, "source magnitude spread at order 3 (p.u.)");
  corruption.add(simulate);

  auto* recover_cmd = app.add_subcommand("recover", "estimate injections and voltages");
  add_common(recover_cmd);
  add_out(recover_cmd);
  recover_cmd->add_option("--design", design_path, "design.json")->required();
  recover_cmd->add_option("--measurements", measurements_path, "measurements.json")->required();
  solver.add(recover_cmd);

  auto* report = app.add_subcommand("report", "compare an estimate with its scenario");
  add_common(report);
  add_out(report);
  report->add_option("--scenario", scenario_path, "scenario.json")->required();
  report->add_option("--estimate", estimate_path, "estimate.json")->required();
  report->add_option("--measurements", measurements_path, "measurements.json, for derived thresholds");
  report->add_option("--threshold", solver.threshold, "support threshold");

  auto* run = app.add_subcommand("run", "design, simulate, recover and report in one pass");
  add_common(run);
  add_out(run);
  run->add_option("--k", k, "number of harmonic sources");
  run->add_option("--m", m, "number of monitor channels (default min(60, candidates))");
  run->add_option("--orders", orders, "harmonic orders (default 3,5,...,23)")->delimiter(',');
  run->add_option("--seed", seed, "master seed");
  run->add_option("--design", design_path, "reuse a stored design.json");
  run->add_option("--magnitude-mean", mag_mean, "mean source magnitude at order 3 (p.u.)");
  run->add_option("--magnitude-std", mag_std, "source magnitude spread at order 3 (p.u.)");
  corruption.add(run);
  ga.add(run);
  solver.add(run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    const NetworkCase network = load_case(case_path);
    auto default_m = [&] {
      return m.value_or(std::min<Index>(60, network.bus_count() + network.branch_count()));
    };

    if (*validate) {
      print_case_summary(network);
      return kExitOk;
    }

    if (*design) {
      std::vector<HarmonicOrderModel> models;
      std::vector<CandidateMatrix> candidates;
      build_order_data(network, parse_orders(orders), models, candidates);
      GaParams p = ga.p;
      p.rng_seed = derive_seed(seed, "design");
      const SensingDesign d = ga_select_rows(candidates, network, default_m(), k, p);
      const auto dir = prepare_dir(out_dir);
      write_json_file(dir / "design.json", to_json(d, &p));
      print_design(d);
      if (verbosity > 0) std::cerr << "wrote " << (dir / "design.json").string() << '\n';
      return kExitOk;
    }

    if (*simulate) {
      std::vector<HarmonicOrderModel> models;
      std::vector<CandidateMatrix> candidates;
      const SensingDesign d = load_design(design_path, network, models, candidates);
      std::optional<CorruptionSpec> c = corruption.spec();
      if (c) c->rng_seed = derive_seed(seed, "corruption");
      InjectionParams p;
      p.bus_count = network.bus_count();
      p.sparsity = k;
      p.orders = d.orders;
      p.magnitude_mean = mag_mean;
      p.magnitude_std = mag_std;
      const std::uint64_t scenario_seed = derive_seed(seed, "scenario");
      const InjectionScenario s = make_injection_scenario(p, c ? &*c : nullptr, scenario_seed);
      std::vector<MeasurementSet> ms;
      for (std::size_t i = 0; i < d.orders.size(); ++i)
        ms.push_back(simulate_measurements(candidates[i], d.selected_rows, s.injections[i],
                                           c ? &*c : nullptr));
      const auto dir = prepare_dir(out_dir);
      write_json_file(dir / "scenario.json", to_json(s, network, scenario_seed));
      write_json_file(dir / "measurements.json", to_json(ms, c ? &*c : nullptr));
      std::cout << "sources " << s.support.size() << ", orders " << s.orders.size() << ", channels "
                << d.row_count() << (c ? ", corrupted\n" : ", noise-free\n");
      return kExitOk;
    }

    if (*recover_cmd) {
      std::vector<HarmonicOrderModel> models;
      std::vector<CandidateMatrix> candidates;
      const SensingDesign d = load_design(design_path, network, models, candidates);
      const json mj = read_json_file(measurements_path);
      const std::vector<MeasurementSet> ms = measurements_from_json(mj, candidates);
      if (ms.size() != d.orders.size()) throw ValidationError("measurements and design cover different orders");
      for (std::size_t i = 0; i < ms.size(); ++i)
        if (ms[i].order != d.orders[i] || ms[i].rows != d.selected_rows)
          throw ValidationError("measurements were not taken with this design");
      const std::optional<CorruptionSpec> c = corruption_of(mj);
      const Solver sv = solver.solver.empty() ? (c ? Solver::bpdn : Solver::bp_lp)
                                              : solver_from_string(solver.solver);
      SolverConfig cfg = solver.cfg;
      cfg.validate();
      if (cfg.sparsity_k == 0) cfg.sparsity_k = 2 * d.sparsity_k;
      const HseEstimate e = estimate(recovery_matrices(d, c ? &*c : nullptr), ms, models, sv, cfg,
                                     solver.threshold.value_or(kDefaultSupportThreshold));
      const auto dir = prepare_dir(out_dir);
      write_json_file(dir / "estimate.json", to_json(e, network));
      for (const auto& o : e.per_order)
        std::printf("order %2d: %zu sources, residual %.3e%s\n", o.order, o.support.size(),
                    o.diagnostics.residual_l2, o.failed ? (", failed: " + o.failure).c_str() : "");
      return kExitOk;
    }

    if (*report) {
      const InjectionScenario s = scenario_from_json(read_json_file(scenario_path), network);
      HseEstimate e = estimate_from_json(read_json_file(estimate_path), network);
      std::vector<HarmonicOrderModel> models;
      std::vector<CandidateMatrix> candidates;
      build_order_data(network, s.orders, models, candidates);
      for (auto& o : e.per_order) {
        if (o.injections.size() != network.bus_count())
          throw ValidationError("estimate does not match the case bus count");
      }
      std::optional<CorruptionSpec> c;
      if (!measurements_path.empty()) c = corruption_of(read_json_file(measurements_path));
      const std::vector<double> thresholds =
          support_thresholds(s, c ? &*c : nullptr, solver.threshold);
      const TruthState truth = make_truth(s, models);
      const EvaluationReport r = evaluate(truth, e, thresholds);
      const auto dir = prepare_dir(out_dir);
      write_json_file(dir / "report.json", to_json(r, network));
      write_text_file(dir / "report.csv", report_csv(truth, e, network));
      print_report(r);
      return kExitOk;
    }

    if (*run) {
      ExperimentSpec spec;
      spec.case_path = case_path;
      spec.orders = parse_orders(orders);
      spec.k = k;
      spec.m = default_m();
      spec.magnitude_mean = mag_mean;
      spec.magnitude_std = mag_std;
      spec.corruption = corruption.spec();
      if (!solver.solver.empty()) spec.solver = solver_from_string(solver.solver);
      spec.solver_config = solver.cfg;
      spec.ga = ga.p;
      spec.design_path = design_path;
      spec.seed = seed;
      spec.support_threshold = solver.threshold;
      spec.output_dir = out_dir;
      const ExperimentOutcome out = run_experiment(spec);
      if (verbosity > 0) print_design(out.design);
      print_report(out.report);
      return kExitOk;
    }
  } catch (const StageError& e) {
    return report_error(e, e.stage() == "spec" ? kExitInvalid : kExitStage);
  } catch (const IoError& e) {
    return report_error(e, kExitIo);
  } catch (const Error& e) {
    return report_error(e, kExitInvalid);
  } catch (const std::exception& e) {
    return report_error(e, kExitStage);
  }
  return kExitInvalid;
}
