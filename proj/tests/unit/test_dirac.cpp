#include "phs/dirac.hpp"
#include "phs/errors.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using phs::BondElement;
using phs::GramSpace;
using phs::Matrix;
using phs::SubspaceBasis;
using phs::Vector;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Matrix mat(Eigen::Index r, Eigen::Index c, std::initializer_list<double> v) {
  Matrix m(r, c);
  auto it = v.begin();
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = *it++;
  }
  return m;
}

}  // namespace

TEST(GramSpaceTest, RejectsAsymmetricAndIndefinite) {
  EXPECT_THROW(GramSpace(mat(2, 2, {1, 0.5, 0.4, 1})), phs::StructuralError);
  EXPECT_THROW(GramSpace(mat(2, 2, {1, 0, 0, -1})), phs::StructuralError);
  EXPECT_THROW(GramSpace(Matrix(2, 3)), phs::DimensionMismatch);
  EXPECT_EQ(GramSpace(Matrix(0, 0)).dim(), 0);
}

TEST(BondPairingTest, HandEvaluations) {
  const GramSpace id = GramSpace::identity(2);
  EXPECT_DOUBLE_EQ(phs::bond_pairing(BondElement(vec({1, 0}), vec({0, 1})), BondElement(vec({0, 1}), vec({1, 0})), id), 2.0);
  // two pure efforts pair to zero; a pure effort against a pure flow gives <f, e>
  EXPECT_DOUBLE_EQ(phs::bond_pairing(BondElement(vec({0, 0}), vec({3, -2})), BondElement(vec({0, 0}), vec({5, 7})), id), 0.0);
  EXPECT_DOUBLE_EQ(phs::bond_pairing(BondElement(vec({0, 0}), vec({3, -2})), BondElement(vec({5, 7}), vec({0, 0})), id), 1.0);
  const GramSpace two(mat(1, 1, {2}));
  EXPECT_DOUBLE_EQ(phs::bond_pairing(BondElement(vec({1}), vec({1})), BondElement(vec({1}), vec({1})), two), 4.0);
}

TEST(BondPairingTest, DimensionMismatchRejected) {
  EXPECT_THROW(BondElement(vec({1, 2}), vec({1})), phs::DimensionMismatch);
  EXPECT_THROW(phs::bond_pairing(BondElement(vec({1}), vec({1})), BondElement(vec({1}), vec({1})), GramSpace::identity(2)),
               phs::DimensionMismatch);
}

TEST(BondPairingTest, SymmetricAndSkewGraphIsNull) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 1 + trial % 6;
    const GramSpace g(oracle::random_spd(rng, n));
    const BondElement a(oracle::random_matrix(rng, n, 1).col(0), oracle::random_matrix(rng, n, 1).col(0));
    const BondElement b(oracle::random_matrix(rng, n, 1).col(0), oracle::random_matrix(rng, n, 1).col(0));
    EXPECT_NEAR(phs::bond_pairing(a, b, g), phs::bond_pairing(b, a, g), 1e-12);
    EXPECT_NEAR(phs::bond_pairing(a, a, g), 2.0 * g.duality(a.flow, a.effort), 1e-12);
    // M J skew in the Gram: pairing of (J e, e) with itself vanishes
    const Matrix j = g.gram().llt().solve(oracle::random_skew(rng, n));
    const Vector e = oracle::random_matrix(rng, n, 1).col(0);
    const BondElement je(j * e, e);
    EXPECT_NEAR(phs::bond_pairing(je, je, g), 0.0, 1e-10);
  }
}

TEST(CompanionTest, SingleFlowDirection) {
  const SubspaceBasis d(mat(2, 1, {1, 0}));
  const SubspaceBasis c = phs::orthogonal_companion(d, GramSpace::identity(1));
  ASSERT_EQ(c.rank(), 1);
  EXPECT_LT(phs::subspace_distance(c.basis(), mat(2, 1, {1, 0})), 1e-12);
}

TEST(CompanionTest, ZeroGraphIsSelfCompanion) {
  const SubspaceBasis d = phs::graph_subspace(Matrix::Zero(2, 2));
  const SubspaceBasis c = phs::orthogonal_companion(d, GramSpace::identity(2));
  EXPECT_EQ(c.rank(), 2);
  EXPECT_LT(phs::subspace_distance(c.basis(), d.basis()), 1e-12);
}

TEST(CompanionTest, RandomPlaneMatchesNullSpaceOracle) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const SubspaceBasis d(oracle::random_matrix(rng, 4, 2));
    const GramSpace g = GramSpace::identity(2);
    const SubspaceBasis c = phs::orthogonal_companion(d, g);
    ASSERT_EQ(c.rank(), 2);
    const Matrix cross = d.basis().transpose() * phs::bond_form(g) * c.basis();
    EXPECT_LE(cross.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(oracle::span_gap(c.basis(), oracle::companion(d.basis(), g.gram())), 1e-10);
  }
}

TEST(CompanionTest, RankDeficientInputRejected) {
  EXPECT_THROW(SubspaceBasis(mat(2, 2, {1, 2, 0, 0})), phs::StructuralError);
  EXPECT_THROW(phs::orthogonal_companion(SubspaceBasis(mat(3, 1, {1, 0, 0})), GramSpace::identity(1)),
               phs::DimensionMismatch);
}

TEST(CompanionTest, InvolutionAndDimensionCount) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index n = 1 + trial % 5;
    const Eigen::Index k = 1 + trial % (2 * n);
    const GramSpace g(oracle::random_spd(rng, n));
    const SubspaceBasis d(oracle::random_matrix(rng, 2 * n, k));
    const SubspaceBasis c = phs::orthogonal_companion(d, g);
    EXPECT_EQ(d.rank() + c.rank(), 2 * n);
    if (c.rank() == 0) continue;
    const SubspaceBasis cc = phs::orthogonal_companion(c, g);
    EXPECT_LT(phs::subspace_distance(cc.basis(), d.basis()), 1e-10);
  }
}

TEST(IsDiracTest, Examples) {
  EXPECT_TRUE(phs::is_dirac(phs::graph_subspace(mat(2, 2, {0, -1, 1, 0})), GramSpace::identity(2)));
  EXPECT_FALSE(phs::is_dirac(SubspaceBasis(Matrix::Identity(2, 2)), GramSpace::identity(1)));
  EXPECT_TRUE(phs::is_dirac(SubspaceBasis(mat(2, 1, {0, 1})), GramSpace::identity(1)));
  EXPECT_FALSE(phs::is_dirac(phs::graph_subspace(Matrix::Identity(1, 1)), GramSpace::identity(1)));
}

TEST(IsDiracTest, RandomGramSkewGraphs) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 1 + trial % 8;
    const GramSpace g(oracle::random_spd(rng, n));
    const Matrix j = g.gram().llt().solve(oracle::random_skew(rng, n));
    EXPECT_TRUE(phs::is_dirac(phs::graph_subspace(j), g)) << "trial " << trial;
  }
}

TEST(GraphSubspaceTest, Shapes) {
  const SubspaceBasis z = phs::graph_subspace(Matrix::Zero(2, 2));
  EXPECT_EQ(z.rank(), 2);
  EXPECT_EQ(z.ambient_dim(), 4);
  EXPECT_TRUE(z.basis().topRows(2).isZero());
  const SubspaceBasis id = phs::graph_subspace(Matrix::Identity(1, 1));
  EXPECT_EQ(id.basis(), mat(2, 1, {1, 1}));
  const SubspaceBasis rot = phs::graph_subspace(mat(2, 2, {0, -1, 1, 0}));
  EXPECT_EQ(rot.rank(), 2);
  EXPECT_EQ(rot.basis(), mat(4, 2, {0, -1, 1, 0, 1, 0, 0, 1}));
}

TEST(SkewLikeTest, Examples) {
  EXPECT_EQ(phs::check_skew_symmetric_like(mat(2, 2, {0, -3, 3, 0}), GramSpace::identity(2)), 0.0);
  EXPECT_DOUBLE_EQ(phs::check_skew_symmetric_like(Matrix::Identity(1, 1), GramSpace::identity(1)), 2.0);
  EXPECT_EQ(phs::check_skew_symmetric_like(mat(2, 2, {0, -2, 1, 0}), GramSpace::diagonal(vec({1, 2}))), 0.0);
  EXPECT_THROW(phs::check_skew_symmetric_like(Matrix::Zero(2, 3), GramSpace::identity(2)), phs::DimensionMismatch);
}

TEST(ExtendedStructureTest, Examples) {
  const Matrix e = phs::extended_structure_matrix(mat(2, 2, {0, -1, 1, 0}), mat(2, 1, {1, 0}));
  EXPECT_EQ(e, mat(3, 3, {0, -1, 1, 1, 0, 0, -1, 0, 0}));
  EXPECT_EQ(phs::extended_structure_matrix(Matrix::Zero(1, 1), Matrix::Zero(1, 1)), Matrix::Zero(2, 2));
  EXPECT_THROW(phs::extended_structure_matrix(Matrix::Identity(2, 2), Matrix::Zero(2, 1)), phs::StructuralError);
}

TEST(ExtendedStructureTest, RandomSkewIsDirac) {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 1 + trial % 6;
    const Eigen::Index m = 1 + trial % 3;
    const GramSpace state(oracle::random_spd(rng, n));
    const GramSpace input(oracle::random_spd(rng, m));
    const Matrix j = state.gram().llt().solve(oracle::random_skew(rng, n));
    const Matrix b = oracle::random_matrix(rng, n, m);
    const Matrix e = phs::extended_structure_matrix(j, b, state, input);
    const GramSpace ext(phs::block_diag({&state.gram(), &input.gram()}));
    const double scale = phs::inf_norm(ext.gram() * e);
    EXPECT_LE(phs::check_skew_symmetric_like(e, ext), 1e-14 * scale * 10);
    EXPECT_TRUE(phs::is_dirac(phs::graph_subspace(e), ext));
  }
}
