// SPDX-License-Identifier: Apache-2.0
//
// JSON and CSV forms of the pipeline artifacts. Complex numbers are written as
// [re, im] pairs; buses are identified by their case ids.
#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "hse/estimation.hpp"
#include "hse/measurement.hpp"
#include "hse/network.hpp"
#include "hse/sensing_design.hpp"

namespace hse {

using json = nlohmann::json;

inline json to_json(const CVector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back({v(i).real(), v(i).imag()});
  return a;
}

inline CVector cvector_from_json(const json& a) {
  if (!a.is_array()) throw FormatError("expected an array of [re, im] pairs");
  CVector v(static_cast<Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const json& p = a[i];
    if (!p.is_array() || p.size() != 2) throw FormatError("complex entries must be [re, im]");
    v(static_cast<Index>(i)) = cplx(p[0].get<double>(), p[1].get<double>());
  }
  return v;
}

inline json bus_ids(const NetworkCase& c, const std::vector<Index>& positions) {
  json a = json::array();
  for (Index p : positions) a.push_back(c.buses.at(static_cast<std::size_t>(p)).id);
  return a;
}

inline std::vector<Index> bus_positions(const NetworkCase& c, const json& ids) {
  std::vector<Index> out;
  for (const auto& id : ids) out.push_back(c.bus_index(id.get<int>()));
  return out;
}

inline json to_json(const GaParams& p) {
  return {{"population_size", p.population_size}, {"generations", p.generations},
          {"crossover_rate", p.crossover_rate},   {"mutation_rate", p.mutation_rate},
          {"elitism_count", p.elitism_count},     {"rng_seed", p.rng_seed}};
}

inline json to_json(const CorruptionSpec& c) {
  return {{"measurement_noise_std", c.measurement_noise_std},
          {"matrix_error_std", c.matrix_error_std},
          {"background_injection_std", c.background_injection_std},
          {"rng_seed", c.rng_seed}};
}

inline CorruptionSpec corruption_from_json(const json& j) {
  CorruptionSpec c;
  c.measurement_noise_std = j.value("measurement_noise_std", c.measurement_noise_std);
  c.matrix_error_std = j.value("matrix_error_std", c.matrix_error_std);
  c.background_injection_std = j.value("background_injection_std", c.background_injection_std);
  c.rng_seed = j.value("rng_seed", c.rng_seed);
  return c;
}

inline json to_json(const SensingDesign& d, const GaParams* ga = nullptr) {
  json j;
  j["sparsity_k"] = d.sparsity_k;
  j["m"] = d.selected_rows.size();
  j["orders"] = d.orders;
  j["selected_rows"] = d.selected_rows;
  j["objective"] = d.objective;
  json terms = json::array();
  for (std::size_t i = 0; i < d.orders.size() && i < d.per_order_terms.size(); ++i)
    terms.push_back({{"order", d.orders[i]},
                     {"coherence", d.per_order_terms[i]},
                     {"weighted", d.per_order_terms[i] / d.orders[i]}});
  j["per_order_terms"] = terms;
  j["full_rank"] = d.full_rank;
  j["spark_certified"] = d.spark_certified;
  json ps = json::array();
  for (const auto& p : d.monitors) {
    json e = {{"row", p.row}, {"kind", to_string(p.kind)}, {"bus", p.bus_id}};
    if (p.kind == PlacementKind::current) {
      e["branch"] = p.branch;
      e["to_bus"] = p.to_bus_id;
    }
    ps.push_back(e);
  }
  j["placements"] = ps;
  j["counts"] = {{"voltage", count_kind(d.monitors, PlacementKind::voltage)},
                 {"current", count_kind(d.monitors, PlacementKind::current)},
                 {"devices", device_count(d.monitors)}};
  if (ga) j["ga"] = to_json(*ga);
  if (!d.best_history.empty()) j["best_fitness_history"] = d.best_history;
  return j;
}

/// Rebuilds a design from its stored row set against freshly built candidates.
inline SensingDesign design_from_json(const json& j, const std::vector<CandidateMatrix>& candidates,
                                      const NetworkCase& network) {
  if (!j.contains("selected_rows")) throw FormatError("design JSON lacks 'selected_rows'");
  const auto rows = j["selected_rows"].get<std::vector<Index>>();
  return make_design(rows, candidates, network, j.value("sparsity_k", 0));
}

inline json to_json(const InjectionScenario& s, const NetworkCase& c, std::uint64_t seed) {
  json j;
  j["seed"] = seed;
  j["orders"] = s.orders;
  j["support"] = bus_ids(c, s.support);
  json inj = json::array();
  for (std::size_t i = 0; i < s.orders.size(); ++i)
    inj.push_back({{"order", s.orders[i]}, {"injections", to_json(s.injections[i])}});
  j["per_order"] = inj;
  return j;
}

inline InjectionScenario scenario_from_json(const json& j, const NetworkCase& c) {
  InjectionScenario s;
  s.orders = j.at("orders").get<std::vector<int>>();
  s.support = bus_positions(c, j.at("support"));
  std::sort(s.support.begin(), s.support.end());
  for (const auto& e : j.at("per_order")) s.injections.push_back(cvector_from_json(e.at("injections")));
  if (s.injections.size() != s.orders.size()) throw FormatError("scenario orders/injections mismatch");
  return s;
}

inline json to_json(const std::vector<MeasurementSet>& ms, const CorruptionSpec* corruption) {
  json j;
  json arr = json::array();
  for (const auto& m : ms)
    arr.push_back({{"order", m.order}, {"rows", m.rows}, {"values", to_json(m.values)}});
  j["per_order"] = arr;
  j["corruption"] = corruption ? to_json(*corruption) : json(nullptr);
  return j;
}

inline std::vector<MeasurementSet> measurements_from_json(
    const json& j, const std::vector<CandidateMatrix>& candidates) {
  std::vector<MeasurementSet> out;
  for (const auto& e : j.at("per_order")) {
    MeasurementSet m;
    m.order = e.at("order").get<int>();
    m.rows = e.at("rows").get<std::vector<Index>>();
    m.values = cvector_from_json(e.at("values"));
    if (static_cast<Index>(m.rows.size()) != m.values.size())
      throw FormatError("measurement rows and values differ in length");
    for (const auto& c : candidates)
      if (c.order == m.order)
        for (Index r : m.rows) m.tags.push_back(c.row_tags.at(static_cast<std::size_t>(r)));
    out.push_back(std::move(m));
  }
  return out;
}

inline json to_json(const HseEstimate& e, const NetworkCase& c) {
  json arr = json::array();
  for (const auto& o : e.per_order) {
    json d = {{"solver", std::string(to_string(o.diagnostics.solver))},
              {"converged", o.diagnostics.converged},
              {"iterations", o.diagnostics.iterations},
              {"residual_l2", o.diagnostics.residual_l2},
              {"objective_value", o.diagnostics.objective_value},
              {"ill_conditioned", o.diagnostics.ill_conditioned}};
    json entry = {{"order", o.order},
                  {"injections", to_json(o.injections)},
                  {"voltages", to_json(o.voltages)},
                  {"support", bus_ids(c, o.support)},
                  {"diagnostics", d},
                  {"failed", o.failed}};
    if (o.failed) entry["failure"] = o.failure;
    arr.push_back(entry);
  }
  return {{"per_order", arr}};
}

inline HseEstimate estimate_from_json(const json& j, const NetworkCase& c) {
  HseEstimate e;
  for (const auto& o : j.at("per_order")) {
    OrderEstimate oe;
    oe.order = o.at("order").get<int>();
    oe.injections = cvector_from_json(o.at("injections"));
    oe.voltages = cvector_from_json(o.at("voltages"));
    oe.support = bus_positions(c, o.at("support"));
    oe.failed = o.value("failed", false);
    oe.failure = o.value("failure", std::string());
    const json& d = o.at("diagnostics");
    oe.diagnostics.solver = solver_from_string(d.at("solver").get<std::string>());
    oe.diagnostics.converged = d.value("converged", false);
    oe.diagnostics.iterations = d.value("iterations", 0);
    oe.diagnostics.residual_l2 = d.value("residual_l2", 0.0);
    oe.diagnostics.objective_value = d.value("objective_value", 0.0);
    oe.diagnostics.x_hat = stack_real(oe.injections);
    e.per_order.push_back(std::move(oe));
  }
  return e;
}

inline json to_json(const EvaluationReport& r, const NetworkCase& c) {
  json arr = json::array();
  for (const auto& o : r.per_order)
    arr.push_back({{"order", o.order},
                   {"support_threshold", o.support_threshold},
                   {"precision", o.precision},
                   {"recall", o.recall},
                   {"true_sources", o.true_sources},
                   {"estimated_sources", o.estimated_sources},
                   {"max_current_error", o.max_current_error},
                   {"mean_current_error", o.mean_current_error},
                   {"max_voltage_error", o.max_voltage_error},
                   {"mean_voltage_error", o.mean_voltage_error},
                   {"false_sources", bus_ids(c, o.false_sources)},
                   {"missed_sources", bus_ids(c, o.missed_sources)},
                   {"solver_failed", o.solver_failed}});
  return {{"summary",
           {{"min_precision", r.min_precision()},
            {"min_recall", r.min_recall()},
            {"max_current_error", r.max_current_error()},
            {"max_voltage_error", r.max_voltage_error()}}},
          {"per_order", arr}};
}

/// Per-bus, per-order magnitudes behind the injection and voltage plots.
inline std::string report_csv(const TruthState& truth, const HseEstimate& est, const NetworkCase& c) {
  std::ostringstream os;
  os.precision(10);
  os << "order,bus,true_current,estimated_current,current_abs_error,true_voltage,"
        "estimated_voltage,voltage_abs_error\n";
  for (std::size_t i = 0; i < truth.orders.size(); ++i) {
    const OrderEstimate& e = est.at(truth.orders[i]);
    for (Index b = 0; b < truth.injections[i].size(); ++b) {
      const double ti = std::abs(truth.injections[i](b));
      const double ei = std::abs(e.injections(b));
      const double tv = std::abs(truth.voltages[i](b));
      const double ev = std::abs(e.voltages(b));
      os << truth.orders[i] << ',' << c.buses[static_cast<std::size_t>(b)].id << ',' << ti << ','
         << ei << ',' << std::abs(e.injections(b) - truth.injections[i](b)) << ',' << tv << ','
         << ev << ',' << std::abs(ev - tv) << '\n';
    }
  }
  return os.str();
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("'" + path + "': " + e.what());
  }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
  write_text_file(path, j.dump(1) + "\n");
}

}  // namespace hse
