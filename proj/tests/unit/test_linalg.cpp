#include "phs/errors.hpp"
#include "phs/linalg.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using phs::Matrix;

TEST(LinalgTest, NormsOfEmptyAndSmall) {
  EXPECT_EQ(phs::inf_norm(Matrix(0, 3)), 0.0);
  Matrix m(2, 2);
  m << 1, -2, 3, 0.5;
  EXPECT_DOUBLE_EQ(phs::inf_norm(m), 3.5);
  EXPECT_DOUBLE_EQ(phs::max_abs(m), 3.0);
}

TEST(LinalgTest, NullSpaceAgreesWithGaussJordan) {
  std::mt19937 rng(1);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = oracle::random_matrix(rng, 3, 7) ;
    const Matrix z = phs::null_space(a, 1e-12);
    EXPECT_EQ(z.cols(), 4);
    EXPECT_LE((a * z).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(oracle::span_gap(z, oracle::null_space(a)), 1e-10);
  }
  EXPECT_EQ(phs::null_space(Matrix(0, 3), 1e-12), Matrix::Identity(3, 3));
}

TEST(LinalgTest, KronAndBlockDiag) {
  Matrix a(1, 2);
  a << 1, 2;
  Matrix b(2, 1);
  b << 3, 4;
  Matrix k(2, 2);
  k << 3, 6, 4, 8;
  EXPECT_EQ(phs::kron(a, b), k);
  const Matrix e(0, 0);
  const Matrix bd = phs::block_diag({&a, &e, &b});
  EXPECT_EQ(bd.rows(), 3);
  EXPECT_EQ(bd.cols(), 3);
  EXPECT_EQ(bd(2, 2), 4.0);
  EXPECT_EQ(bd(0, 2), 0.0);
}

TEST(LinalgTest, ConditionNumber) {
  EXPECT_TRUE(std::isinf(phs::condition_number(Matrix::Zero(2, 2))));
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 4;
  d(1, 1) = 0.5;
  EXPECT_NEAR(phs::condition_number(d), 8.0, 1e-12);
}

TEST(LinalgTest, RequireShape) {
  EXPECT_THROW(phs::require_shape(Matrix(2, 2), 2, 3, "x"), phs::DimensionMismatch);
  EXPECT_NO_THROW(phs::require_shape(Matrix(2, 3), 2, 3, "x"));
}
