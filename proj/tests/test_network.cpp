#include <gtest/gtest.h>

#include <string>

#include "oracles.hpp"

using namespace hse;

namespace {

std::string data(const char* name) { return std::string(HSE_DATA_DIR) + "/" + name; }

const char* kTwoBus = R"({
  "base_mva": 100, "base_kv": 138,
  "buses": [{"id": 1, "name": "a", "g": 0, "b": 0}, {"id": 2, "name": "b", "g": 0, "b": 0}],
  "branches": [{"from": 1, "to": 2, "r": 0, "x": 0.1, "b_sh": 0, "transformer": false, "tap": 1}],
  "generators": [{"bus": 1, "x_sub": 0.2}]
})";

std::string with_branch(const std::string& branch) {
  return R"({"base_mva": 100, "base_kv": 138,
    "buses": [{"id": 1, "name": "a", "g": 0, "b": 0}, {"id": 2, "name": "b", "g": 0, "b": 0}],
    "branches": [)" + branch + R"(],
    "generators": [{"bus": 1, "x_sub": 0.2}]})";
}

}  // namespace

TEST(LoadCase, Ieee118Counts) {
  const NetworkCase c = load_case(data("ieee118.json"));
  EXPECT_EQ(c.bus_count(), 118);
  EXPECT_EQ(c.line_count(), 177u);
  EXPECT_EQ(c.transformer_count(), 9u);
  EXPECT_EQ(c.generators.size(), 35u);
}

TEST(LoadCase, TriangleEcho) {
  const NetworkCase c = load_case(data("tiny3.json"));
  EXPECT_EQ(c.bus_count(), 3);
  EXPECT_EQ(c.branch_count(), 3);
  for (const auto& b : c.branches) {
    EXPECT_EQ(b.r, 0.0);
    EXPECT_EQ(b.x, 0.1);
  }
}

TEST(LoadCase, DanglingBranchNamesBus) {
  try {
    parse_case(with_branch(R"({"from": 1, "to": 999, "r": 0, "x": 0.1, "b_sh": 0, "transformer": false, "tap": 1})"));
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("999"), std::string::npos) << e.what();
  }
}

TEST(LoadCase, RejectsInvariantViolations) {
  EXPECT_THROW(parse_case(with_branch(R"({"from": 1, "to": 2, "r": -0.1, "x": 0.1, "b_sh": 0, "transformer": false, "tap": 1})")),
               ValidationError);
  EXPECT_THROW(parse_case(with_branch(R"({"from": 1, "to": 2, "r": 0.1, "x": 0, "b_sh": 0, "transformer": false, "tap": 1})")),
               ValidationError);
  const std::string dup = R"({"base_mva": 100, "base_kv": 138,
    "buses": [{"id": 1, "name": "a", "g": 0, "b": 0}, {"id": 1, "name": "b", "g": 0, "b": 0}],
    "branches": [], "generators": []})";
  EXPECT_THROW(parse_case(dup), ValidationError);
  const std::string island = R"({"base_mva": 100, "base_kv": 138,
    "buses": [{"id": 1, "name": "a", "g": 0, "b": 0}, {"id": 2, "name": "b", "g": 0, "b": 0},
              {"id": 3, "name": "c", "g": 0, "b": 0}],
    "branches": [{"from": 1, "to": 2, "r": 0, "x": 0.1, "b_sh": 0, "transformer": false, "tap": 1}],
    "generators": [{"bus": 1, "x_sub": 0.2}]})";
  try {
    parse_case(island);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find('3'), std::string::npos) << e.what();
  }
}

TEST(LoadCase, SyntaxErrorHasLineContext) {
  try {
    parse_case("{\n \"buses\": [\n  {\"id\": 1,,}\n ]\n}");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(LoadCase, MissingFileIsIoError) {
  EXPECT_THROW(load_case(data("does_not_exist.json")), IoError);
}

TEST(LoadCase, JsonRoundTrip) {
  const NetworkCase c = load_case(data("case5.json"));
  const NetworkCase d = parse_case(case_to_json(c).dump());
  ASSERT_EQ(d.branch_count(), c.branch_count());
  for (std::size_t i = 0; i < c.branches.size(); ++i) {
    EXPECT_EQ(d.branches[i].tap, c.branches[i].tap);
    EXPECT_EQ(d.branches[i].is_transformer, c.branches[i].is_transformer);
  }
  EXPECT_EQ(d.buses[2].shunt_b, c.buses[2].shunt_b);
}

TEST(HarmonicModel, TwoBusSeriesAdmittance) {
  const NetworkCase c = parse_case(kTwoBus);
  const HarmonicOrderModel m = build_harmonic_model(c, 5);
  const cplx y = m.branch_admittances[0].series;
  EXPECT_NEAR(y.real(), 0.0, 1e-12);
  EXPECT_NEAR(y.imag(), -2.0, 1e-12);
}

TEST(HarmonicModel, InverseIdentityAllCases) {
  for (const char* f : {"tiny3.json", "case5.json", "case10.json", "ieee118.json"}) {
    const NetworkCase c = load_case(data(f));
    for (int h : {1, 3, 5, 11, 23}) {
      const HarmonicOrderModel m = build_harmonic_model(c, h);
      const double err =
          (m.ybus * m.zbus - CMatrix::Identity(c.bus_count(), c.bus_count())).cwiseAbs().maxCoeff();
      EXPECT_LE(err, 1e-9) << f << " h=" << h;
    }
  }
}

TEST(HarmonicModel, TriangleMatchesGaussJordan) {
  const NetworkCase c = load_case(data("tiny3.json"));
  const HarmonicOrderModel m = build_harmonic_model(c, 3);
  const CMatrix z = oracle::gauss_inverse(oracle::stamp_ybus(c, 3));
  EXPECT_LE((m.zbus - z).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(HarmonicModel, YbusMatchesIndependentStamp) {
  for (const char* f : {"case5.json", "case10.json", "ieee118.json"}) {
    const NetworkCase c = load_case(data(f));
    for (int h : {3, 7}) {
      const HarmonicOrderModel m = build_harmonic_model(c, h);
      EXPECT_LE((m.ybus - oracle::stamp_ybus(c, h)).cwiseAbs().maxCoeff(), 1e-9) << f;
    }
  }
}

TEST(HarmonicModel, FundamentalReducesToPlainAdmittance) {
  const NetworkCase c = load_case(data("case5.json"));
  const HarmonicOrderModel m = build_harmonic_model(c, 1);
  for (std::size_t k = 0; k < c.branches.size(); ++k) {
    const auto& br = c.branches[k];
    const cplx expect = 1.0 / cplx(br.r, br.x);
    EXPECT_LE(std::abs(m.branch_admittances[k].series - expect), 1e-12);
  }
}

TEST(HarmonicModel, ReactanceScalingMatchesOrderScaling) {
  // x -> 3x at order 1 gives the same reactive series admittance as order 3.
  NetworkCase c = load_case(data("tiny3.json"));
  NetworkCase scaled = c;
  for (auto& b : scaled.branches) b.x *= 3.0;
  for (auto& g : scaled.generators) g.x_sub *= 3.0;
  const HarmonicOrderModel a = build_harmonic_model(scaled, 1);
  const HarmonicOrderModel b = build_harmonic_model(c, 3);
  for (std::size_t k = 0; k < c.branches.size(); ++k)
    EXPECT_NEAR(a.branch_admittances[k].series.imag(), b.branch_admittances[k].series.imag(), 1e-12);
  EXPECT_LE((a.zbus - b.zbus).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(HarmonicModel, SymmetricForUnitTap) {
  for (const char* f : {"tiny3.json", "ieee118.json"}) {
    const NetworkCase c = load_case(data(f));
    bool unit_tap = true;
    for (const auto& b : c.branches) unit_tap = unit_tap && b.tap == 1.0;
    const HarmonicOrderModel m = build_harmonic_model(c, 5);
    if (unit_tap) EXPECT_LE((m.zbus - m.zbus.transpose()).cwiseAbs().maxCoeff(), 1e-9);
    // Y stays symmetric under the MATPOWER-style tap as well (no phase shift).
    EXPECT_LE((m.ybus - m.ybus.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(HarmonicModel, RejectsBadOrders) {
  const NetworkCase c = parse_case(kTwoBus);
  EXPECT_THROW(build_harmonic_model(c, 0), ArgumentError);
  EXPECT_THROW(build_harmonic_model(c, 4), ArgumentError);
  EXPECT_THROW(build_harmonic_model(c, -3), ArgumentError);
}

TEST(HarmonicModel, UngroundedReactiveNetworkIsSingular) {
  NetworkCase c = parse_case(kTwoBus);
  c.generators.clear();
  EXPECT_THROW(build_harmonic_model(c, 3), SingularityError);
}

TEST(HarmonicModel, OptionalLoadAdmittance) {
  const std::string text = R"({"base_mva": 100, "base_kv": 138,
    "buses": [{"id": 1, "name": "a", "g": 0, "b": 0},
              {"id": 2, "name": "b", "g": 0, "b": 0, "load_g": 0.5, "load_b": -0.2}],
    "branches": [{"from": 1, "to": 2, "r": 0, "x": 0.1, "b_sh": 0, "transformer": false, "tap": 1}],
    "generators": [{"bus": 1, "x_sub": 0.2}]})";
  const NetworkCase c = parse_case(text);
  NetworkCase bare = c;
  bare.buses[1].load_admittance.reset();
  const HarmonicOrderModel with = build_harmonic_model(c, 5);
  const HarmonicOrderModel without = build_harmonic_model(bare, 5);
  // Inductive load: conductance kept, susceptance divided by h.
  const cplx d = with.ybus(1, 1) - without.ybus(1, 1);
  EXPECT_NEAR(d.real(), 0.5, 1e-12);
  EXPECT_NEAR(d.imag(), -0.04, 1e-12);
}
