#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "matconvex/divided_difference.hpp"
#include "matconvex/sampler.hpp"

using namespace matconvex;

namespace {

const double e = std::numbers::e;

TEST(DividedDifference, SmallExamples) {
  EXPECT_NEAR(divided_difference(catalog::square(), {0.0, 1.0, 2.0}), 1.0, 1e-15);
  EXPECT_NEAR(divided_difference(catalog::reciprocal(), {1.0, 2.0}), -0.5, 1e-15);
  EXPECT_NEAR(divided_difference(catalog::cube(), {1.0, 1.0, 1.0}), 3.0, 1e-14);
  EXPECT_NEAR(divided_difference(catalog::exp(), {0.0, 0.0}), 1.0, 1e-15);
}

TEST(DividedDifference, ConfluentNodesGiveScaledDerivatives) {
  // [x,...,x] (k+1 times) = f^(k)(x) / k!
  EXPECT_NEAR(divided_difference(catalog::exp(), {0.5, 0.5, 0.5, 0.5}), std::exp(0.5) / 6.0, 1e-15);
  EXPECT_NEAR(divided_difference(catalog::reciprocal(), {2.0, 2.0, 2.0}), 1.0 / 8.0, 1e-15);
  // nodes within the merge threshold are treated as equal; the exact value is e (e^h - 1) / h
  const double h = 1e-9;
  EXPECT_NEAR(divided_difference(catalog::exp(), {1.0, 1.0 + h}), e * std::expm1(h) / h, 1e-12);
}

TEST(DividedDifference, MixedConfluence) {
  // [0,0,1]_exp = ([0,1] - [0,0]) / 1 = e - 2
  EXPECT_NEAR(divided_difference(catalog::exp(), {0.0, 0.0, 1.0}), e - 2.0, 1e-15);
  // [1,1,2]_{1/t} = ([1,2] - [1,1]) / 1 = -1/2 + 1 = 1/2
  EXPECT_NEAR(divided_difference(catalog::reciprocal(), {1.0, 2.0, 1.0}), 0.5, 1e-15);
}

TEST(DividedDifference, PolynomialOfDegreeNHasConstantNthDifference) {
  // leading coefficient of the degree-n polynomial, whatever the nodes
  auto f = FunctionModel::polynomial({3.0, -1.0, 0.5, 2.0, -4.0});
  for (auto nodes : {std::vector<double>{-1, 0.2, 0.3, 4, 7}, std::vector<double>{0, 0, 0, 0, 0},
                     std::vector<double>{1, 1, 2, 2, 3}}) {
    EXPECT_NEAR(divided_difference(f, nodes), -4.0, 1e-12);
  }
}

TEST(DividedDifference, Symmetric) {
  std::vector<double> x{0.3, 1.7, 0.9, 1.1, 0.6};
  double base = divided_difference(catalog::neg_log(), x);
  std::sort(x.begin(), x.end());
  do {
    EXPECT_NEAR(divided_difference(catalog::neg_log(), x), base, 1e-12 * std::abs(base));
  } while (std::next_permutation(x.begin(), x.end()));
}

TEST(DividedDifference, ExtendedPrecisionAgrees) {
  DividedDifferenceOptions opt;
  opt.precision = Precision::extended;
  std::vector<double> x{0.5, 0.8, 1.1, 1.5};
  EXPECT_NEAR(divided_difference(catalog::exp(), x), divided_difference(catalog::exp(), x, opt), 1e-13);
}

TEST(DividedDifference, Table) {
  std::vector<double> x{2.0, 0.0, 1.0};
  auto t = divided_difference_table(catalog::square(), x);
  ASSERT_EQ(t.nodes, (std::vector<double>{0.0, 1.0, 2.0}));
  ASSERT_EQ(t.columns.size(), 3u);
  EXPECT_EQ(t.columns[0], (std::vector<double>{0.0, 1.0, 4.0}));
  EXPECT_NEAR(t.columns[1][0], 1.0, 1e-15);
  EXPECT_NEAR(t.columns[1][1], 3.0, 1e-15);
  EXPECT_NEAR(t.top(), 1.0, 1e-15);
}

TEST(DividedDifference, OutsideDomainThrows) {
  EXPECT_THROW(divided_difference(catalog::reciprocal(), {-1.0, 1.0}), DomainError);
  EXPECT_THROW(divided_difference(FunctionModel::logarithm(), {0.0}), DomainError);
}

TEST(HermiteQuadrature, Examples) {
  EXPECT_NEAR(hermite_simplex_quadrature(catalog::square(), {0.0, 1.0, 2.0}), 1.0, 1e-12);
  EXPECT_NEAR(hermite_simplex_quadrature(catalog::exp(), {0.0, 1.0}, 16), e - 1.0, 1e-10);
  EXPECT_NEAR(hermite_simplex_quadrature(catalog::reciprocal(), {1.0, 2.0, 3.0}, 16), 1.0 / 6.0, 1e-8);
}

TEST(HermiteQuadrature, AgreesWithRecurrence) {
  Rng rng(5);
  for (int n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> x(n + 1);
      for (double& v : x) v = 0.5 + 1.5 * unit_uniform(rng);
      for (const auto& f : {catalog::exp(), catalog::reciprocal(), catalog::neg_log()}) {
        double a = divided_difference(f, x), b = hermite_simplex_quadrature(f, x);
        EXPECT_NEAR(a, b, 1e-6 * std::max(1.0, std::abs(a)));
      }
    }
  }
}

TEST(ReciprocalClosedForm, Examples) {
  EXPECT_DOUBLE_EQ(reciprocal_closed_form({1.0}), 1.0);
  EXPECT_DOUBLE_EQ(reciprocal_closed_form({1.0, 2.0}), -0.5);
  EXPECT_DOUBLE_EQ(reciprocal_closed_form({1.0, 2.0, 4.0}), 0.125);
}

TEST(ReciprocalClosedForm, MatchesRecurrenceToSixthOrder) {
  Rng rng(11);
  for (int n = 0; n <= 6; ++n) {
    std::vector<double> x(n + 1);
    for (double& v : x) v = 0.5 + 1.5 * unit_uniform(rng);
    double b = reciprocal_closed_form(x);
    EXPECT_NEAR(divided_difference(catalog::reciprocal(), x), b, 1e-10 * std::abs(b)) << "n=" << n;
  }
}

TEST(GeometricMeanBound, Examples) {
  auto r1 = geometric_mean_bound_check(catalog::exp(), {0.0, 1.0});
  EXPECT_NEAR(r1.lhs, e - 1.0, 1e-12);
  EXPECT_NEAR(r1.rhs, std::exp(0.5), 1e-12);
  EXPECT_TRUE(r1.satisfied);

  auto r2 = geometric_mean_bound_check(catalog::exp(), {0.0, 1.0, 2.0});
  EXPECT_NEAR(r2.lhs, (e * e - 2.0 * e + 1.0) / 2.0, 1e-12);
  EXPECT_NEAR(r2.rhs, e / 2.0, 1e-12);
  EXPECT_TRUE(r2.satisfied);

  auto r3 = geometric_mean_bound_check(catalog::exp(), {0.7, 0.7, 0.7, 0.7});
  EXPECT_NEAR(r3.lhs, r3.rhs, 1e-15);
  EXPECT_TRUE(r3.satisfied);
}

TEST(GeometricMeanBound, ReciprocalRootOfExpIsConvex) {
  // c(x) = (e^x)^(-1/(n+1)) is convex, so [x0..xn]_exp >= exp(mean) / n!
  EXPECT_EQ(sample_reciprocal_root_curvature(catalog::exp(), 3, -2.0, 2.0), Curvature::convex);
}

}  // namespace
