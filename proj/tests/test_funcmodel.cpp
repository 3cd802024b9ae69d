#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "matconvex/function_model.hpp"

using namespace matconvex;

namespace {

const FunctionModel p4 = FunctionModel::polynomial({0.0, 1.0, -0.5, 1.0 / 3.0, -0.25});

TEST(FunctionModel, Values) {
  EXPECT_DOUBLE_EQ(catalog::exp().eval(0.0), 1.0);
  EXPECT_DOUBLE_EQ(catalog::reciprocal().eval(2.0), 0.5);
  EXPECT_NEAR(p4.eval(1.0), 7.0 / 12.0, 1e-15);
}

TEST(FunctionModel, Derivatives) {
  EXPECT_DOUBLE_EQ(catalog::exp().eval_derivative(0.0, 5), 1.0);
  EXPECT_DOUBLE_EQ(catalog::reciprocal().eval_derivative(1.0, 3), -6.0);
  EXPECT_NEAR(p4.eval_derivative(0.0, 4), -6.0, 1e-14);
  // log^(k)(t) = (-1)^(k-1) (k-1)! / t^k
  EXPECT_NEAR(FunctionModel::logarithm().eval_derivative(2.0, 3), 2.0 / 8.0, 1e-15);
  // pow: d^2/dt^2 t^1.5 = 0.75 t^-0.5
  EXPECT_NEAR(FunctionModel::power(1.5).eval_derivative(4.0, 2), 0.375, 1e-15);
}

TEST(FunctionModel, DoubleDoubleDerivativesMatchDouble) {
  for (int k = 0; k <= 6; ++k) {
    double t = 0.7;
    EXPECT_NEAR(to_double(catalog::reciprocal().derivative<DoubleDouble>(DoubleDouble(t), k)),
                catalog::reciprocal().eval_derivative(t, k), 1e-13 * std::abs(catalog::reciprocal().eval_derivative(t, k)));
    EXPECT_NEAR(to_double(catalog::exp().derivative<DoubleDouble>(DoubleDouble(t), k)), std::exp(t), 1e-15);
  }
}

TEST(FunctionModel, IdentityMobiusLeavesFunctionUnchanged) {
  auto g = catalog::exp().compose_mobius(Mobius{1, 0, 0, 1}, Interval::real_line());
  for (double t : {-1.0, 0.0, 0.3, 2.0})
    for (int k = 0; k <= 3; ++k) EXPECT_DOUBLE_EQ(g.eval_derivative(t, k), catalog::exp().eval_derivative(t, k));
}

TEST(FunctionModel, HalfLineCompactification) {
  auto f = p4.restricted(Interval(0.0, 1.0, true, false));
  auto g = f.compose_mobius(Mobius{1, 0, 1, 1}, Interval(0.0, Interval::inf, true, false));
  for (double t : {0.0, 0.5, 3.0, 100.0}) EXPECT_NEAR(g.eval(t), p4.eval(t / (1.0 + t)), 1e-14);
  // chain rule at t = 1: u = 1/2, u' = 1/(1+t)^2 = 1/4
  EXPECT_NEAR(g.eval_derivative(1.0, 1), p4.eval_derivative(0.5, 1) * 0.25, 1e-14);
  EXPECT_TRUE(g.contains(1e9));
}

TEST(FunctionModel, ShiftedReciprocal) {
  auto g = catalog::reciprocal().compose_mobius(Mobius{1, 1, 0, 1}, Interval(0.0, Interval::inf));
  EXPECT_DOUBLE_EQ(g.eval(1.0), 0.5);
  EXPECT_NEAR(g.eval_derivative(1e-300, 1), -1.0, 1e-12);
  // 1/(t+1): k-th derivative (-1)^k k! / (t+1)^(k+1)
  EXPECT_NEAR(g.eval_derivative(1.0, 3), -6.0 / 16.0, 1e-14);
}

TEST(FunctionModel, HigherDerivativesOfComposedMobius) {
  // t/(1+t) = 1 - 1/(1+t); k-th derivative (-1)^(k+1) k! / (1+t)^(k+1)
  auto g = FunctionModel::polynomial({0, 1}).compose_mobius(Mobius{1, 0, 1, 1}, Interval(0.0, Interval::inf));
  double t = 0.5;
  double fact = 1.0;
  for (int k = 1; k <= 6; ++k) {
    fact *= k;
    double expected = (k % 2 == 1 ? 1.0 : -1.0) * fact / std::pow(1.0 + t, k + 1);
    EXPECT_NEAR(g.eval_derivative(t, k), expected, 1e-12 * std::abs(expected)) << "k=" << k;
  }
}

TEST(FunctionModel, PostAffineAndNegation) {
  auto f = catalog::neg_log();
  EXPECT_NEAR(f.eval(std::numbers::e), -1.0, 1e-15);
  EXPECT_NEAR(f.eval_derivative(2.0, 2), 0.25, 1e-15);
  auto g = catalog::exp().with_affine(3.0, -1.0);
  EXPECT_NEAR(g.eval(0.0), 2.0, 1e-15);
  EXPECT_NEAR(g.eval_derivative(0.0, 2), 3.0, 1e-15);
}

TEST(FunctionModel, DomainEnforced) {
  EXPECT_FALSE(catalog::reciprocal().contains(0.0));
  EXPECT_FALSE(FunctionModel::logarithm().contains(-1.0));
  EXPECT_TRUE(catalog::exp().contains(-50.0));
}

TEST(FunctionModel, ParseRoundTrip) {
  for (const char* spec : {"exp", "log", "recip", "pow:0.5", "poly:0,0,1", "affine:2,1"}) {
    auto f = parse_function(spec);
    auto g = parse_function(f.spec());
    for (double t : {0.5, 1.5, 3.0}) EXPECT_DOUBLE_EQ(f.eval(t), g.eval(t)) << spec;
  }
  auto h = parse_function("mobius(1,0,1,1)@poly:0,1", Interval::open(0.0, 4.0));
  EXPECT_NEAR(h.eval(1.0), 0.5, 1e-15);
  auto a = parse_function("affine(-1,0)@log");
  EXPECT_NEAR(a.eval(1.0), 0.0, 1e-15);
  EXPECT_NEAR(a.eval_derivative(1.0, 1), -1.0, 1e-15);
}

TEST(FunctionModel, ParseErrors) {
  EXPECT_THROW(parse_function("sinh"), ParseError);
  EXPECT_THROW(parse_function("poly:"), ParseError);
  EXPECT_THROW(parse_function("pow:a"), ParseError);
  EXPECT_THROW(parse_function("log", Interval::open(-1.0, 1.0)), ParseError);
}

TEST(Interval, ParseAndGrid) {
  auto i = parse_interval("(0.1,10)");
  EXPECT_EQ(i, Interval::open(0.1, 10.0));
  auto h = parse_interval("[0,inf)");
  EXPECT_TRUE(h.contains(0.0));
  EXPECT_FALSE(h.is_finite());
  EXPECT_THROW(parse_interval("(2,1)"), std::invalid_argument);
  EXPECT_THROW(parse_interval("0,1"), ParseError);
  auto g = Interval::open(0.0, 1.0).grid(4);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_DOUBLE_EQ(g[0], 0.125);
  EXPECT_DOUBLE_EQ(g[3], 0.875);
  for (double t : h.grid(16)) EXPECT_TRUE(h.interior_contains(t));
}

TEST(DoubleDouble, ErrorFreeTransforms) {
  double s, e;
  detail::two_sum(1.0, 1e-20, s, e);
  EXPECT_EQ(s, 1.0);
  EXPECT_EQ(e, 1e-20);
  DoubleDouble x = DoubleDouble(1.0) + DoubleDouble(1e-20);
  EXPECT_EQ((x - DoubleDouble(1.0)).hi(), 1e-20);
  DoubleDouble third = DoubleDouble(1.0) / DoubleDouble(3.0);
  DoubleDouble back = third * DoubleDouble(3.0) - DoubleDouble(1.0);
  EXPECT_LT(std::abs(back.hi()), 1e-31);
  EXPECT_NEAR(to_double(exp(DoubleDouble(1.0))), std::numbers::e, 1e-16);
  DoubleDouble l = log(exp(DoubleDouble(0.3))) - DoubleDouble(0.3);
  EXPECT_LT(std::abs(l.hi()), 1e-30);
}

}  // namespace
