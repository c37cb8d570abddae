// SPDX-License-Identifier: Apache-2.0
//
// Power-network case description and per-harmonic-order nodal models.
//
// Harmonic element model used throughout:
//   series branch admittance   y = 1 / (r + j*h*x)
//   half line charging         y_sh = j*h*b_sh/2
//   generator                  grounded shunt 1 / (j*h*x_sub)
//   bus shunt                  g + j*h*b
//   optional load admittance   g + j*b/h when b < 0 (inductive), g + j*h*b otherwise
// Transformers use the off-nominal tap on the from side with no phase shift.
#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hse/errors.hpp"
#include "hse/linalg.hpp"

namespace hse {

struct Bus {
  int id = 0;
  std::string name;
  double shunt_g = 0.0;  ///< per-unit conductance
  double shunt_b = 0.0;  ///< per-unit susceptance at the fundamental
  std::optional<cplx> load_admittance;  ///< fundamental-frequency load, if modeled
};

struct Branch {
  int from_bus = 0;
  int to_bus = 0;
  double r = 0.0;
  double x = 0.0;
  double b_sh = 0.0;  ///< total line charging of the pi model
  bool is_transformer = false;
  double tap = 1.0;
};

struct Generator {
  int bus = 0;
  double x_sub = 0.0;  ///< subtransient reactance, per unit
};

struct NetworkCase {
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<Generator> generators;
  double base_mva = 100.0;
  double base_kv = 138.0;

  Index bus_count() const noexcept { return static_cast<Index>(buses.size()); }
  Index branch_count() const noexcept { return static_cast<Index>(branches.size()); }

  std::size_t transformer_count() const noexcept {
    std::size_t n = 0;
    for (const auto& br : branches) n += br.is_transformer ? 1 : 0;
    return n;
  }
  std::size_t line_count() const noexcept { return branches.size() - transformer_count(); }

  /// Position of a bus id in `buses`; throws ValidationError if absent.
  Index bus_index(int id) const {
    for (std::size_t i = 0; i < buses.size(); ++i)
      if (buses[i].id == id) return static_cast<Index>(i);
    throw ValidationError("unknown bus id " + std::to_string(id));
  }
};

/// Checks every NetworkCase invariant; throws ValidationError naming the
/// offending element.
inline void validate_case(const NetworkCase& c) {
  if (c.buses.empty()) throw ValidationError("case has no buses");
  std::map<int, Index> index;
  for (std::size_t i = 0; i < c.buses.size(); ++i) {
    if (!index.emplace(c.buses[i].id, static_cast<Index>(i)).second)
      throw ValidationError("duplicate bus id " + std::to_string(c.buses[i].id));
  }
  auto lookup = [&](int id, const std::string& who) {
    auto it = index.find(id);
    if (it == index.end())
      throw ValidationError(who + " references missing bus " + std::to_string(id));
    return it->second;
  };
  std::vector<std::vector<Index>> adj(c.buses.size());
  for (std::size_t k = 0; k < c.branches.size(); ++k) {
    const auto& br = c.branches[k];
    const std::string who = "branch " + std::to_string(k) + " (" + std::to_string(br.from_bus) +
                            "->" + std::to_string(br.to_bus) + ")";
    const Index f = lookup(br.from_bus, who);
    const Index t = lookup(br.to_bus, who);
    if (f == t) throw ValidationError(who + " is a self loop");
    if (!(br.r >= 0.0)) throw ValidationError(who + " has negative resistance");
    if (br.x == 0.0 || !std::isfinite(br.x)) throw ValidationError(who + " has zero reactance");
    if (!(br.tap > 0.0)) throw ValidationError(who + " has non-positive tap");
    adj[static_cast<std::size_t>(f)].push_back(t);
    adj[static_cast<std::size_t>(t)].push_back(f);
  }
  for (std::size_t k = 0; k < c.generators.size(); ++k) {
    const auto& g = c.generators[k];
    lookup(g.bus, "generator " + std::to_string(k));
    if (g.x_sub == 0.0 || !std::isfinite(g.x_sub))
      throw ValidationError("generator " + std::to_string(k) + " at bus " + std::to_string(g.bus) +
                            " has zero subtransient reactance");
  }
  std::vector<bool> seen(c.buses.size(), false);
  std::queue<Index> q;
  q.push(0);
  seen[0] = true;
  while (!q.empty()) {
    const Index u = q.front();
    q.pop();
    for (Index v : adj[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = true;
        q.push(v);
      }
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i])
      throw ValidationError("network is disconnected: bus " + std::to_string(c.buses[i].id) +
                            " is unreachable from bus " + std::to_string(c.buses[0].id));
}

namespace detail {

inline std::string line_context(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

template <typename T>
T required(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw FormatError(where + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(where + ": bad value for '" + key + "': " + e.what());
  }
}

}  // namespace detail

/// Parses case JSON text and validates it.
inline NetworkCase parse_case(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("case JSON parse error at " + detail::line_context(text, e.byte) + ": " +
                      e.what());
  }
  if (!j.is_object()) throw FormatError("case JSON must be an object");
  NetworkCase c;
  c.base_mva = j.value("base_mva", 100.0);
  c.base_kv = j.value("base_kv", 138.0);
  for (const char* key : {"buses", "branches", "generators"})
    if (!j.contains(key) || !j[key].is_array())
      throw FormatError(std::string("case JSON: '") + key + "' must be an array");

  std::size_t k = 0;
  for (const auto& jb : j["buses"]) {
    const std::string where = "buses[" + std::to_string(k++) + "]";
    Bus b;
    b.id = detail::required<int>(jb, "id", where);
    b.name = jb.value("name", "Bus " + std::to_string(b.id));
    b.shunt_g = jb.value("g", 0.0);
    b.shunt_b = jb.value("b", 0.0);
    if (jb.contains("load_g") || jb.contains("load_b"))
      b.load_admittance = cplx(jb.value("load_g", 0.0), jb.value("load_b", 0.0));
    c.buses.push_back(std::move(b));
  }
  k = 0;
  for (const auto& jb : j["branches"]) {
    const std::string where = "branches[" + std::to_string(k++) + "]";
    Branch br;
    br.from_bus = detail::required<int>(jb, "from", where);
    br.to_bus = detail::required<int>(jb, "to", where);
    br.r = detail::required<double>(jb, "r", where);
    br.x = detail::required<double>(jb, "x", where);
    br.b_sh = jb.value("b_sh", 0.0);
    br.is_transformer = jb.value("transformer", false);
    br.tap = jb.value("tap", 1.0);
    if (br.tap == 0.0) br.tap = 1.0;
    c.branches.push_back(br);
  }
  k = 0;
  for (const auto& jg : j["generators"]) {
    const std::string where = "generators[" + std::to_string(k++) + "]";
    Generator g;
    g.bus = detail::required<int>(jg, "bus", where);
    g.x_sub = detail::required<double>(jg, "x_sub", where);
    c.generators.push_back(g);
  }
  validate_case(c);
  return c;
}

/// Reads and validates a case file. Throws IoError, FormatError or ValidationError.
inline NetworkCase load_case(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open case file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_case(ss.str());
}

inline nlohmann::json case_to_json(const NetworkCase& c) {
  nlohmann::json j;
  j["base_mva"] = c.base_mva;
  j["base_kv"] = c.base_kv;
  j["buses"] = nlohmann::json::array();
  for (const auto& b : c.buses) {
    nlohmann::json jb = {{"id", b.id}, {"name", b.name}, {"g", b.shunt_g}, {"b", b.shunt_b}};
    if (b.load_admittance) {
      jb["load_g"] = b.load_admittance->real();
      jb["load_b"] = b.load_admittance->imag();
    }
    j["buses"].push_back(jb);
  }
  j["branches"] = nlohmann::json::array();
  for (const auto& br : c.branches)
    j["branches"].push_back({{"from", br.from_bus},
                             {"to", br.to_bus},
                             {"r", br.r},
                             {"x", br.x},
                             {"b_sh", br.b_sh},
                             {"transformer", br.is_transformer},
                             {"tap", br.tap}});
  j["generators"] = nlohmann::json::array();
  for (const auto& g : c.generators) j["generators"].push_back({{"bus", g.bus}, {"x_sub", g.x_sub}});
  return j;
}

/// Harmonic-order admittances of one branch, plus its endpoint positions.
struct BranchAdmittance {
  Index from = 0;
  Index to = 0;
  cplx series;      ///< y_ij^h
  cplx half_shunt;  ///< y_sh,ij^h
  double tap = 1.0;
};

struct HarmonicOrderModel {
  int order = 1;
  CMatrix ybus;
  CMatrix zbus;
  std::vector<BranchAdmittance> branch_admittances;

  Index bus_count() const noexcept { return ybus.rows(); }
};

inline void check_harmonic_order(int h) {
  if (h < 1 || h % 2 == 0)
    throw ArgumentError("harmonic order must be a positive odd integer, got " + std::to_string(h));
}

/// Default acceptance threshold for max|Y*Z - I|.
inline constexpr double kInversionTolerance = 1e-9;

/// Assembles Y^h by nodal rules and inverts it densely.
inline HarmonicOrderModel build_harmonic_model(const NetworkCase& c, int h,
                                               double inversion_tol = kInversionTolerance) {
  check_harmonic_order(h);
  const Index n = c.bus_count();
  const double hd = static_cast<double>(h);
  const cplx j(0.0, 1.0);

  std::map<int, Index> index;
  for (Index i = 0; i < n; ++i) index[c.buses[static_cast<std::size_t>(i)].id] = i;

  HarmonicOrderModel m;
  m.order = h;
  m.ybus = CMatrix::Zero(n, n);
  m.branch_admittances.reserve(c.branches.size());
  for (const auto& br : c.branches) {
    BranchAdmittance ba;
    ba.from = index.at(br.from_bus);
    ba.to = index.at(br.to_bus);
    ba.series = 1.0 / cplx(br.r, hd * br.x);
    ba.half_shunt = j * hd * br.b_sh / 2.0;
    ba.tap = br.tap;
    const double t = br.tap;
    m.ybus(ba.from, ba.from) += ba.series / (t * t) + ba.half_shunt;
    m.ybus(ba.to, ba.to) += ba.series + ba.half_shunt;
    m.ybus(ba.from, ba.to) -= ba.series / t;
    m.ybus(ba.to, ba.from) -= ba.series / t;
    m.branch_admittances.push_back(ba);
  }
  for (Index i = 0; i < n; ++i) {
    const auto& b = c.buses[static_cast<std::size_t>(i)];
    m.ybus(i, i) += cplx(b.shunt_g, hd * b.shunt_b);
    if (b.load_admittance) {
      const double bl = b.load_admittance->imag();
      m.ybus(i, i) += cplx(b.load_admittance->real(), bl < 0.0 ? bl / hd : hd * bl);
    }
  }
  for (const auto& g : c.generators) m.ybus(index.at(g.bus), index.at(g.bus)) += 1.0 / (j * hd * g.x_sub);

  Eigen::FullPivLU<CMatrix> lu(m.ybus);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible())
    throw SingularityError("admittance matrix at order " + std::to_string(h) +
                           " is singular (no path to ground?)");
  m.zbus = lu.inverse();
  const double err = (m.ybus * m.zbus - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(err <= inversion_tol))
    throw SingularityError("admittance matrix at order " + std::to_string(h) +
                           " is numerically singular (max|YZ-I| = " + std::to_string(err) + ")");
  return m;
}

}  // namespace hse
