#include <gtest/gtest.h>

#include "matconvex/classify.hpp"
#include "matconvex/gaps.hpp"

using namespace matconvex;

namespace {

SamplerConfig seeded(std::uint64_t seed) {
  SamplerConfig c;
  c.seed = seed;
  return c;
}

TEST(GapCoefficients, ExactRationals) {
  auto b = gap_coefficients(4, GapKind::concave);
  ASSERT_EQ(b.size(), 5u);
  EXPECT_EQ(b[0], Rational(0));
  EXPECT_EQ(b[1], Rational(1));
  EXPECT_EQ(b[2], Rational(-1, 2));
  EXPECT_EQ(b[3], Rational(1, 3));
  EXPECT_EQ(b[4], Rational(-1, 4));
  auto c = gap_coefficients(4, GapKind::convex);
  EXPECT_EQ(c[2], Rational(1, 2));
  EXPECT_EQ(c[4], Rational(1, 4));
  EXPECT_EQ(rational_string(Rational(-1, 4)), "-1/4");
  EXPECT_EQ(rational_string(Rational(1)), "1");
}

TEST(GapPolynomial, ConcaveKindDerivativeMatricesAtZero) {
  auto g = build_gap_polynomial(2, 4, Interval::open(-1.0, 1.0), GapKind::concave);
  auto p = polynomial_from(g.coefficients);
  auto k = derivative_matrix_K(p, 0.0, 2);
  EXPECT_NEAR(k.matrix(0, 0), -0.5, 1e-15);
  EXPECT_NEAR(k.matrix(0, 1), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(k.matrix(1, 1), -0.25, 1e-15);
  EXPECT_EQ(analyze_symmetric(-k.matrix).verdict, Definiteness::positive_definite);
  EXPECT_EQ(derivative_matrix_M(p, 0.0, 2).verdict, Definiteness::positive_definite);
  EXPECT_GT(g.raw_alpha, 0.0);
  EXPECT_DOUBLE_EQ(g.alpha, kAlphaSafety * g.raw_alpha);
}

TEST(GapPolynomial, CertifiedOnTargetInterval) {
  for (GapKind kind : {GapKind::concave, GapKind::convex}) {
    auto g = build_gap_polynomial(2, 4, Interval::open(-1.0, 1.0), kind);
    EXPECT_EQ(g.certified_interval, Interval::open(-1.0, 1.0));
    EXPECT_NE(test_n_monotone(g.model, g.certified_interval, 2, seeded(1)).verdict, Verdict::fail);
    auto curv = kind == GapKind::concave ? test_n_concave(g.model, g.certified_interval, 2, seeded(1))
                                         : test_n_convex(g.model, g.certified_interval, 2, seeded(1));
    EXPECT_NE(curv.verdict, Verdict::fail);
    // definiteness holds on a grid of the whole target interval
    for (double t : g.certified_interval.grid(32)) EXPECT_TRUE(detail::gap_definite_at(g.model, t, 2, kind, 0.0));
  }
}

TEST(GapPolynomial, NextOrderFailsOnNaturalWindow) {
  for (GapKind kind : {GapKind::concave, GapKind::convex}) {
    auto g = build_natural_gap_polynomial(2, 4, kind);
    auto r = kind == GapKind::concave ? test_n_concave(g.model, g.certified_interval, 3, seeded(2))
                                      : test_n_convex(g.model, g.certified_interval, 3, seeded(2));
    EXPECT_EQ(r.verdict, Verdict::fail) << gap_kind_name(kind);
  }
}

TEST(GapPolynomial, OrderOneOnZeroTwo) {
  auto g = build_gap_polynomial(1, 2, Interval::open(0.0, 2.0), GapKind::concave);
  for (double t : Interval::open(0.0, 2.0).grid(50)) {
    EXPECT_GT(g.model.eval_derivative(t, 1), 0.0);
    EXPECT_LT(g.model.eval_derivative(t, 2), 0.0);
  }
}

TEST(FindAlpha, QuadraticReachesOne) {
  // p = t - t^2/2: p' = 1 - t > 0 and p'' = -1 < 0 exactly on (-1, 1)
  double a = find_alpha(polynomial_from(gap_coefficients(2, GapKind::concave)), 1, GapKind::concave);
  EXPECT_GE(a, 1.0 - 1e-3);
  EXPECT_LT(a, 1.01);
}

TEST(FindAlpha, QuarticIsPositive) {
  EXPECT_GT(find_alpha(polynomial_from(gap_coefficients(4, GapKind::concave)), 2, GapKind::concave), 0.0);
  EXPECT_GT(find_alpha(polynomial_from(gap_coefficients(4, GapKind::convex)), 2, GapKind::convex), 0.0);
}

TEST(FindAlpha, Deterministic) {
  auto p = polynomial_from(gap_coefficients(6, GapKind::concave));
  EXPECT_EQ(find_alpha(p, 3, GapKind::concave), find_alpha(p, 3, GapKind::concave));
}

TEST(ExclusionMinor, Examples) {
  auto b3 = gap_coefficients(3, GapKind::concave);
  auto m32 = degree_exclusion_minor(3, 2, b3);
  EXPECT_EQ(m32.rows, (std::array<int, 2>{1, 2}));
  EXPECT_EQ(m32.matrix[0][0], b3[2]);
  EXPECT_EQ(m32.matrix[0][1], b3[3]);
  EXPECT_EQ(m32.matrix[1][1], Rational(0));
  EXPECT_EQ(m32.determinant, -(b3[3] * b3[3]));

  auto b4 = gap_coefficients(4, GapKind::convex);
  auto m43 = degree_exclusion_minor(4, 3, b4);
  EXPECT_EQ(m43.rows, (std::array<int, 2>{1, 3}));
  EXPECT_EQ(m43.matrix[0][0], b4[2]);
  EXPECT_EQ(m43.matrix[0][1], b4[4]);
  EXPECT_EQ(m43.determinant, -(b4[4] * b4[4]));

  auto b5 = gap_coefficients(5, GapKind::concave);
  auto m53 = degree_exclusion_minor(5, 3, b5);
  EXPECT_EQ(m53.rows, (std::array<int, 2>{2, 3}));
  EXPECT_EQ(m53.determinant, -(b5[5] * b5[5]));
}

TEST(ExclusionMinor, DegreeRange) {
  auto b = gap_coefficients(6, GapKind::concave);
  EXPECT_THROW(degree_exclusion_minor(6, 3, b), std::invalid_argument);
  EXPECT_THROW(degree_exclusion_minor(2, 2, b), std::invalid_argument);
}

TEST(ExclusionMinor, NegativeAlongTheInterval) {
  auto g = build_gap_polynomial(2, 4, Interval::open(-1.0, 1.0), GapKind::concave);
  for (double t : g.certified_interval.grid(16)) EXPECT_LT(exclusion_minor_at(g.model, t, 2), 0.0);
}

TEST(HalflineGap, OrderOne) {
  auto h = build_halfline_gap(1);
  for (double t : {0.0, 0.5, 3.0, 40.0}) EXPECT_LT(h.model.eval_derivative(t, 2), 0.0);
  EXPECT_GE(h.model.eval(0.0), 0.0);
}

TEST(HalflineGap, OrderTwo) {
  auto h = build_halfline_gap(2);
  EXPECT_GE(h.model.eval(0.0), 0.0);
  EXPECT_NEAR(h.model.eval(0.0), h.base.model.eval(0.0) + h.shift, 1e-15);
  EXPECT_NE(test_n_convex(h.model.negated(), Interval::open(0.0, 50.0), 2, seeded(3)).verdict, Verdict::fail);
}

}  // namespace
