#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"

using namespace hse;

namespace {

Matrix h3() {
  Matrix h(2, 3);
  h << 1, 0, 1, 0, 1, 1;
  return h;
}

Matrix dup() {
  Matrix h(3, 3);
  h << 1, 1, 0, 2, 2, 1, 0, 0, 3;
  return h;
}

}  // namespace

TEST(Coherence, Examples) {
  EXPECT_EQ(coherence(Matrix::Identity(4, 4)), 0.0);
  EXPECT_NEAR(coherence(dup()), 1.0, 1e-15);
  EXPECT_NEAR(coherence(h3()), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Coherence, ComplexColumns) {
  CMatrix h(2, 2);
  h << cplx(1, 0), cplx(0, 1), cplx(0, 0), cplx(0, 0);
  // Columns differ by a phase only: fully coherent over C.
  EXPECT_NEAR(coherence(h), 1.0, 1e-15);
}

TEST(Coherence, ZeroColumnNamed) {
  Matrix h(2, 3);
  h << 1, 0, 0, 0, 0, 1;
  try {
    coherence(h);
    FAIL();
  } catch (const ArgumentError& e) {
    EXPECT_NE(std::string(e.what()).find("column 1"), std::string::npos);
  }
  EXPECT_THROW(coherence(Matrix::Ones(3, 1)), ArgumentError);
}

TEST(Spark, Examples) {
  EXPECT_FALSE(spark_exact(Matrix::Identity(3, 3), 3).has_value());
  EXPECT_EQ(spark_exact(dup(), 3), 2);
  EXPECT_EQ(spark_exact(h3(), 3), 3);
  EXPECT_EQ(oracle::brute_spark(h3(), 3), 3);
}

TEST(Spark, ComplexityGuard) {
  EXPECT_THROW(spark_exact(Matrix::Random(10, 60), 10), ComplexityError);
}

TEST(SparkBound, Examples) {
  EXPECT_NEAR(spark_lower_bound(h3()), 1.0 + std::sqrt(2.0), 1e-12);
  EXPECT_LE(spark_lower_bound(h3()), 3.0);
  EXPECT_TRUE(std::isinf(spark_lower_bound(Matrix::Identity(3, 3))));
  EXPECT_NEAR(spark_lower_bound(dup()), 2.0, 1e-12);
}

TEST(Nsp, Examples) {
  EXPECT_EQ(nsp_coefficient(Matrix::Identity(3, 3), 1), 0.0);
  Matrix a(1, 2);
  a << 1, 1;
  EXPECT_NEAR(nsp_coefficient(a, 1), 1.0, 1e-12);
  Matrix b(1, 2);
  b << 1, 2;
  EXPECT_NEAR(nsp_coefficient(b, 1), 2.0, 1e-12);
}

TEST(Nsp, NullSpaceIsOrthonormalAndAnnihilated) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n01;
  Matrix h(3, 7);
  for (Index i = 0; i < h.size(); ++i) h.data()[i] = n01(rng);
  const Matrix ns = null_space(h);
  ASSERT_EQ(ns.cols(), 4);
  EXPECT_LE((h * ns).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((ns.transpose() * ns - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Rip, Examples) {
  EXPECT_NEAR(rip_constant(Matrix::Identity(4, 4), 2), 0.0, 1e-15);
  EXPECT_NEAR(rip_constant(Matrix::Identity(4, 4), 4), 0.0, 1e-15);
  EXPECT_NEAR(rip_constant(Matrix::Random(5, 6), 1), 0.0, 1e-14);
  EXPECT_NEAR(rip_constant(h3(), 2), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_THROW(rip_constant(h3(), 4), ArgumentError);
}

TEST(Rip, MonotoneInK) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n01;
  for (int t = 0; t < 20; ++t) {
    Matrix h(4, 7);
    for (Index i = 0; i < h.size(); ++i) h.data()[i] = n01(rng);
    double prev = 0.0;
    for (int k = 1; k <= 7; ++k) {
      const double d = rip_constant(h, k);
      EXPECT_GE(d, prev - 1e-12);
      prev = d;
    }
  }
}

TEST(Rip, BandHoldsForSparseDifferences) {
  // |H(x1 - x2)|^2 lies within (1 +- delta_2k) |x1 - x2|^2 on normalized columns.
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n01;
  Matrix h(6, 9);
  for (Index i = 0; i < h.size(); ++i) h.data()[i] = n01(rng);
  h.colwise().normalize();
  const int k = 1;
  const double delta = rip_constant(h, 2 * k);
  std::uniform_int_distribution<int> pos(0, 8);
  for (int t = 0; t < 200; ++t) {
    Vector x1 = Vector::Zero(9), x2 = Vector::Zero(9);
    x1(pos(rng)) = n01(rng);
    x2(pos(rng)) = n01(rng);
    const Vector d = x1 - x2;
    const double e = (h * d).squaredNorm();
    EXPECT_LE(e, (1.0 + delta) * d.squaredNorm() + 1e-12);
    EXPECT_GE(e, (1.0 - delta) * d.squaredNorm() - 1e-12);
  }
}

TEST(Diagnose, Consistent) {
  const MatrixDiagnostics d = diagnose(h3(), 3);
  EXPECT_NEAR(d.coherence, 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(d.rank, 2);
  ASSERT_TRUE(d.spark_exact.has_value());
  EXPECT_GE(*d.spark_exact, 2);
  EXPECT_LE(*d.spark_exact, d.rank + 1);
  EXPECT_LE(d.spark_lower_bound, *d.spark_exact);
}

TEST(SparkBound, FuzzNeverExceedsExact) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> n01;
  std::uniform_int_distribution<int> rows(2, 5), cols(3, 8), kind(0, 3);
  for (int t = 0; t < 500; ++t) {
    Matrix h(rows(rng), cols(rng));
    for (Index i = 0; i < h.size(); ++i) h.data()[i] = n01(rng);
    if (kind(rng) == 0) h.col(1) = 2.5 * h.col(0);  // force spark 2 sometimes
    const auto s = spark_exact(h, static_cast<int>(h.cols()));
    const int brute = oracle::brute_spark(h, static_cast<int>(h.cols()));
    ASSERT_EQ(s.value_or(-1), brute) << "trial " << t;
    if (s) EXPECT_LE(spark_lower_bound(h), *s + 1e-9) << "trial " << t;
  }
}
