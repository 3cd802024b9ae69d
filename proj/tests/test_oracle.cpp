#include <cmath>

#include <gtest/gtest.h>

#include "matconvex/gaps.hpp"
#include "matconvex/oracle.hpp"

using namespace matconvex;

namespace {

TEST(MatrixApply, Identity) {
  Rng rng(1);
  auto a = sample_hermitian(3, Interval::open(-1.0, 1.0), rng);
  auto id = FunctionModel::polynomial({0, 1});
  EXPECT_TRUE(matrix_apply(id, a).isApprox(a.matrix, 1e-13));
}

TEST(MatrixApply, SquareOfDiagonal) {
  HermitianMatrix a = HermitianMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  auto r = matrix_apply(catalog::square(), a);
  EXPECT_NEAR(std::abs(r(0, 0) - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(r(1, 1) - 4.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(r(0, 1)), 0.0, 1e-14);
}

TEST(MatrixApply, ExpOfOffDiagonal) {
  const double theta = 0.7;
  HermitianMatrix a = HermitianMatrix::Zero(2, 2);
  a(0, 1) = a(1, 0) = theta;
  auto r = matrix_apply(catalog::exp(), a);
  EXPECT_NEAR(r(0, 0).real(), std::cosh(theta), 1e-14);
  EXPECT_NEAR(r(0, 1).real(), std::sinh(theta), 1e-14);
  EXPECT_NEAR(r(1, 1).real(), std::cosh(theta), 1e-14);
}

TEST(MatrixApply, SpectrumOutsideDomain) {
  HermitianMatrix a = HermitianMatrix::Identity(2, 2) * -1.0;
  EXPECT_THROW(matrix_apply(catalog::reciprocal().restricted(Interval::open(0.0, 1.0)), a), DomainError);
}

TEST(SampleHermitian, ScalarCase) {
  auto s = sample_hermitian(1, Interval::open(0.0, 1.0), 42);
  ASSERT_EQ(s.dimension, 1);
  EXPECT_GT(s.matrix(0, 0).real(), 0.0);
  EXPECT_LT(s.matrix(0, 0).real(), 1.0);
}

TEST(SampleHermitian, SpectrumAndHermiticity) {
  auto s = sample_hermitian(3, Interval::open(0.1, 10.0), 7);
  EXPECT_LE((s.matrix - s.matrix.adjoint()).norm(), 1e-14);
  auto ev = hermitian_eigenvalues(s.matrix);
  for (std::size_t i = 0; i < ev.size(); ++i) {
    EXPECT_GT(ev[i], 0.1);
    EXPECT_LT(ev[i], 10.0);
    EXPECT_NEAR(ev[i], s.spectrum[i], 1e-12);
  }
}

TEST(SampleHermitian, Deterministic) {
  auto a = sample_hermitian(4, Interval::open(-2.0, 2.0), 123);
  auto b = sample_hermitian(4, Interval::open(-2.0, 2.0), 123);
  EXPECT_EQ((a.matrix - b.matrix).norm(), 0.0);
}

TEST(SampleHermitian, HaarUnitaryIsUnitary) {
  Rng rng(3);
  auto u = detail::haar_unitary(5, rng);
  EXPECT_LE((u.adjoint() * u - HermitianMatrix::Identity(5, 5)).norm(), 1e-13);
}

TEST(ConvexityDeficit, SquareIsExact) {
  Rng rng(4);
  for (int k = 0; k < 20; ++k) {
    auto a = sample_hermitian(3, Interval::open(-2.0, 2.0), rng);
    auto b = sample_hermitian(3, Interval::open(-2.0, 2.0), rng);
    const double lam = unit_uniform(rng);
    HermitianMatrix d = a.matrix - b.matrix;
    double expected = lam * (1 - lam) * hermitian_eigenvalues(detail::hermitian_part(d * d)).front();
    EXPECT_NEAR(convexity_deficit(catalog::square(), a.matrix, b.matrix, lam), expected, 1e-12);
  }
}

TEST(ConvexityDeficit, ReciprocalNeverNegative) {
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    auto a = sample_hermitian(3, Interval::open(0.1, 10.0), rng);
    auto b = sample_hermitian(3, Interval::open(0.1, 10.0), rng);
    EXPECT_GE(convexity_deficit(catalog::reciprocal(), a.matrix, b.matrix, unit_uniform(rng)), -1e-8);
  }
}

TEST(MonotonicityDeficit, IdentityGivesSpectrumOfP) {
  Rng rng(6);
  auto a = sample_hermitian(3, Interval::open(-1.0, 1.0), rng);
  auto p = sample_hermitian(3, Interval::open(0.0, 0.5), rng);
  EXPECT_NEAR(monotonicity_deficit(FunctionModel::polynomial({0, 1}), a.matrix, p.matrix), p.spectrum.front(), 1e-13);
}

TEST(WitnessSearch, CubeIsNotMatrixConvexInDimensionTwo) {
  auto r = witness_search(catalog::cube(), Interval::open(0.1, 3.0), 2, Property::convex, 10000, 1);
  ASSERT_TRUE(r.witness);
  EXPECT_LE(r.witness->deficit_min_eigenvalue, -1e-6);
}

TEST(WitnessSearch, SquareIsNotMatrixMonotone) {
  auto r = witness_search(catalog::square(), Interval::open(-2.0, 2.0), 2, Property::monotone, 10000, 2);
  ASSERT_TRUE(r.witness);
  EXPECT_LT(r.witness->deficit_min_eigenvalue, 0.0);
}

TEST(WitnessSearch, GapPolynomialIsTwoMonotone) {
  auto g = build_gap_polynomial(2, 4, Interval::open(-1.0, 1.0), GapKind::concave);
  auto r = witness_search(g.model, g.certified_interval, 2, Property::monotone, 200, 3);
  EXPECT_FALSE(r.witness);
  EXPECT_GE(r.worst_deficit, -1e-8);
}

TEST(WitnessSearch, NoneForOperatorConvexFunctions) {
  EXPECT_FALSE(witness_search(catalog::square(), Interval::open(-3.0, 3.0), 4, Property::convex, 1000, 4).witness);
  EXPECT_FALSE(witness_search(catalog::reciprocal(), Interval::open(0.1, 10.0), 4, Property::convex, 10000, 5).witness);
}

TEST(WitnessSearch, ReplayReproducesTheWitness) {
  auto r = witness_search(catalog::cube(), Interval::open(0.1, 3.0), 2, Property::convex, 10000, 8);
  ASSERT_TRUE(r.witness);
  auto again = replay_witness(catalog::cube(), Interval::open(0.1, 3.0), 2, Property::convex, r.witness->seed_trace);
  EXPECT_EQ(again.deficit_min_eigenvalue, r.witness->deficit_min_eigenvalue);
  EXPECT_EQ((again.a.matrix - r.witness->a.matrix).norm(), 0.0);
}

TEST(WitnessSearch, DimensionLimit) {
  EXPECT_THROW(witness_search(catalog::exp(), Interval::open(0.0, 1.0), 7, Property::convex, 1, 0), std::invalid_argument);
}

TEST(CrossValidation, Examples) {
  CrossValidationConfig cfg;
  cfg.criterion.seed = 9;
  auto a = cross_validate(catalog::reciprocal(), Interval::open(0.1, 10.0), 3, Property::convex, cfg);
  EXPECT_TRUE(a.criterion_pass && a.oracle_pass && a.agree);
  auto b = cross_validate(catalog::cube(), Interval::open(0.1, 10.0), 2, Property::convex, cfg);
  EXPECT_FALSE(b.criterion_pass);
  EXPECT_FALSE(b.oracle_pass);
  EXPECT_TRUE(b.agree);
  EXPECT_TRUE(b.criterion.counterexample);
  EXPECT_TRUE(b.oracle.witness);
  auto c = cross_validate(catalog::square(), Interval::open(-3.0, 3.0), 4, Property::convex, cfg);
  EXPECT_TRUE(c.agree);
}

}  // namespace
