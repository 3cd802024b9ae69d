#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "matconvex/criterion_matrices.hpp"
#include "matconvex/sampler.hpp"

using namespace matconvex;

namespace {

const FunctionModel p4 = FunctionModel::polynomial({0.0, 1.0, -0.5, 1.0 / 3.0, -0.25});

void expect_matrix(const Eigen::MatrixXd& m, std::vector<std::vector<double>> expected, double tol = 1e-14) {
  ASSERT_EQ(m.rows(), static_cast<Eigen::Index>(expected.size()));
  for (std::size_t i = 0; i < expected.size(); ++i)
    for (std::size_t j = 0; j < expected.size(); ++j)
      EXPECT_NEAR(m(i, j), expected[i][j], tol) << "(" << i << "," << j << ")";
}

TEST(PickMatrix, Square) {
  const double a = 0.3, b = 1.7;
  std::vector<double> nodes{a, b};
  auto r = pick_matrix(catalog::square(), nodes);
  expect_matrix(r.matrix, {{2 * a, a + b}, {a + b, 2 * b}});
}

TEST(PickMatrix, CoalescesRepeatedNodes) {
  std::vector<double> nodes{0.0, 0.0};
  auto r = pick_matrix(catalog::exp(), nodes);
  expect_matrix(r.matrix, {{1.0}});
}

TEST(PickMatrix, ReciprocalIsNegative) {
  std::vector<double> nodes{1.0, 2.0};
  auto r = pick_matrix(catalog::reciprocal(), nodes);
  expect_matrix(r.matrix, {{-1.0, -0.5}, {-0.5, -0.25}});
  EXPECT_EQ(r.verdict, Definiteness::indefinite);
}

TEST(PickMatrix, LogIsPositive) {
  std::vector<double> nodes{0.2, 0.9, 3.0, 7.5};
  EXPECT_TRUE(is_psd(pick_matrix(FunctionModel::logarithm(), nodes).verdict));
}

TEST(KrausMatrix, SquareIsAllOnes) {
  std::vector<double> nodes{-0.4, 0.1, 2.2};
  auto r = kraus_matrix(catalog::square(), nodes, 0.1);
  expect_matrix(r.matrix, {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
  EXPECT_EQ(r.verdict, Definiteness::positive_semidefinite);
}

TEST(KrausMatrix, Cube) {
  const double t1 = 0.5, t2 = 2.0, s = t1;
  std::vector<double> nodes{t1, t2};
  auto r = kraus_matrix(catalog::cube(), nodes, s);
  expect_matrix(r.matrix, {{2 * t1 + s, t1 + t2 + s}, {t1 + t2 + s, 2 * t2 + s}});
  EXPECT_NEAR(r.matrix.determinant(), -(t1 - t2) * (t1 - t2), 1e-13);
  EXPECT_EQ(r.verdict, Definiteness::indefinite);
}

TEST(KrausMatrix, Reciprocal) {
  std::vector<double> nodes{1.0, 2.0};
  auto r = kraus_matrix(catalog::reciprocal(), nodes, 1.0);
  expect_matrix(r.matrix, {{1.0, 0.5}, {0.5, 0.25}});
  EXPECT_TRUE(is_psd(r.verdict));
}

TEST(KrausMatrix, AnchorOutsideDomainThrows) {
  std::vector<double> nodes{1.0, 2.0};
  EXPECT_THROW(kraus_matrix(catalog::reciprocal(), nodes, -1.0), DomainError);
}

TEST(LeadingDeterminants, Examples) {
  std::vector<double> nodes{0.0, 1.0};
  auto sq = leading_determinants(catalog::square(), nodes, 0.0);
  ASSERT_EQ(sq.size(), 2u);
  EXPECT_NEAR(sq[0], 1.0, 1e-15);
  EXPECT_NEAR(sq[1], 0.0, 1e-15);

  auto cu = leading_determinants(catalog::cube(), nodes, 0.0);
  EXPECT_NEAR(cu[0], 0.0, 1e-15);
  EXPECT_NEAR(cu[1], -1.0, 1e-14);

  // exp, s = 0: [[1/2, e-2], [e-2, [0,1,1]]] with [0,1,1] = e - (e-1) = 1
  auto ex = leading_determinants(catalog::exp(), nodes, 0.0);
  const double e = std::numbers::e;
  EXPECT_NEAR(ex[0], 0.5, 1e-15);
  EXPECT_NEAR(ex[1], 0.5 * 1.0 - (e - 2.0) * (e - 2.0), 1e-14);
}

TEST(Factorization, SquareIsSingular) {
  std::vector<double> nodes{0.0, 1.0, 2.0};
  auto rows = confluent_factorization_check(catalog::square(), nodes, 1.0);
  ASSERT_GE(rows.size(), 2u);
  EXPECT_NEAR(rows[1].leading_determinant, 0.0, 1e-15);
  EXPECT_NEAR(rows[1].confluent_determinant * 1.0, 0.0, 1e-15);
  EXPECT_LE(rows[1].residual, 1e-12);
}

TEST(Factorization, Exp) {
  std::vector<double> nodes{0.0, 1.0};
  auto rows = confluent_factorization_check(catalog::exp(), nodes, 0.0);
  for (const auto& r : rows) EXPECT_LE(r.residual, 1e-10) << "r=" << r.r;
}

TEST(Factorization, RandomDegreeEightPolynomials) {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> c(9);
    for (double& x : c) x = 2.0 * unit_uniform(rng) - 1.0;
    auto f = FunctionModel::polynomial(c);
    std::vector<double> nodes;
    while (nodes.size() < 5) {
      double x = 2.0 * unit_uniform(rng) - 1.0;
      bool far = true;
      for (double y : nodes) far = far && std::abs(x - y) >= 1e-2;
      if (far) nodes.push_back(x);
    }
    double s = 2.0 * unit_uniform(rng) - 1.0;
    for (const auto& r : confluent_factorization_check(f, nodes, s)) EXPECT_LE(r.residual, 1e-8);
  }
}

TEST(Factorization, RejectsCoincidentNodes) {
  std::vector<double> nodes{0.5, 0.5};
  EXPECT_THROW(confluent_factorization_check(catalog::exp(), nodes, 0.0), std::invalid_argument);
}

TEST(DerivativeMatrices, K) {
  auto sq = derivative_matrix_K(catalog::square(), 0.7, 2);
  expect_matrix(sq.matrix, {{1, 0}, {0, 0}});
  EXPECT_TRUE(is_psd(sq.verdict));

  auto kp = derivative_matrix_K(p4, 0.0, 2);
  expect_matrix(kp.matrix, {{-0.5, 1.0 / 3.0}, {1.0 / 3.0, -0.25}});
  EXPECT_EQ(kp.verdict, Definiteness::indefinite);
  EXPECT_EQ(analyze_symmetric(-kp.matrix).verdict, Definiteness::positive_definite);

  auto q = derivative_matrix_K(catalog::quartic(), 1.0, 2);
  expect_matrix(q.matrix, {{6, 4}, {4, 1}});
  EXPECT_NEAR(q.matrix.determinant(), -10.0, 1e-12);
  EXPECT_EQ(q.verdict, Definiteness::indefinite);
}

TEST(DerivativeMatrices, M) {
  auto mp = derivative_matrix_M(p4, 0.0, 2);
  expect_matrix(mp.matrix, {{1, -0.5}, {-0.5, 1.0 / 3.0}});
  EXPECT_NEAR(mp.matrix.determinant(), 1.0 / 12.0, 1e-15);
  EXPECT_EQ(mp.verdict, Definiteness::positive_definite);

  auto me = derivative_matrix_M(catalog::exp(), 0.0, 2);
  expect_matrix(me.matrix, {{1, 0.5}, {0.5, 1.0 / 6.0}});
  // det = 1/6 - 1/4 < 0
  EXPECT_NEAR(me.matrix.determinant(), -1.0 / 12.0, 1e-15);
  EXPECT_EQ(me.verdict, Definiteness::indefinite);

  auto ma = derivative_matrix_M(FunctionModel::affine(2.5, -1.0), 0.3, 2);
  expect_matrix(ma.matrix, {{2.5, 0}, {0, 0}});
  EXPECT_TRUE(is_psd(ma.verdict));
  EXPECT_FALSE(is_psd(derivative_matrix_M(FunctionModel::affine(-1.0, 0.0), 0.3, 2).verdict));
}

TEST(SymmetricVerdict, Rule) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 0, 0, 0;
  EXPECT_EQ(analyze_symmetric(a).verdict, Definiteness::positive_semidefinite);
  a << -0.5, 1.0 / 3.0, 1.0 / 3.0, -0.25;
  EXPECT_EQ(analyze_symmetric(a).verdict, Definiteness::indefinite);
  EXPECT_EQ(analyze_symmetric(Eigen::MatrixXd::Zero(3, 3)).verdict, Definiteness::positive_semidefinite);
  a << 2, 1, 1, 2;
  EXPECT_EQ(analyze_symmetric(a).verdict, Definiteness::positive_definite);
  // a tiny negative eigenvalue inside the tolerance band is not a certificate
  a << 1, 0, 0, -1e-12;
  EXPECT_TRUE(is_psd(analyze_symmetric(a).verdict));
  a << 1, 0, 0, -1e-6;
  EXPECT_EQ(analyze_symmetric(a).verdict, Definiteness::indefinite);
}

TEST(SymmetricVerdict, NonSymmetricRejected) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 0, 1;
  EXPECT_THROW(analyze_symmetric(a), std::invalid_argument);
}

}  // namespace
