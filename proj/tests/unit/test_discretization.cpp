#include "phs/bcs.hpp"
#include "phs/discretization.hpp"
#include "phs/errors.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using phs::AxisKind;
using phs::CoefficientField;
using phs::Factor;
using phs::GridSpec;
using phs::Matrix;
using phs::PortSystem;
using phs::StaggeredAxis;
using phs::Vector;

namespace {

CoefficientField one(const char* name) { return CoefficientField(name, 1.0); }

PortSystem wave(const GridSpec& g) { return phs::build_wave(g, one("rho"), one("T")); }
PortSystem elasticity(int nx, int ny) {
  return phs::build_elasticity_2d(GridSpec::square(nx, ny), one("rho"), phs::ElasticStiffness::lame(1.0, 1.0));
}
PortSystem beam(int n, double len = 1.0) { return phs::build_beam_1d(GridSpec::line(n, len), one("mu"), one("EI")); }
PortSystem maxwell(int nx, int ny, int nz) { return phs::build_maxwell_3d(GridSpec::cube(nx, ny, nz), one("eps"), one("mu")); }

// e1^T (L^T M2 - M1 K) e2 for every coordinate pair.
Matrix green_lhs(const PortSystem& s) { return s.L.transpose() * s.x2.gram() - s.x1.gram() * s.K; }

void expect_exact(const PortSystem& s, double rel = 1e-12) {
  EXPECT_LE(phs::green_residual(s), rel * phs::green_scale(s)) << s.label;
}

void expect_positive_diagonal(const Matrix& m) {
  if (m.rows() == 0) return;
  Matrix off = m;
  off.diagonal().setZero();
  EXPECT_EQ(phs::max_abs(off), 0.0);
  EXPECT_GT(m.diagonal().minCoeff(), 0.0);
}

Vector block_values(const PortSystem& s, const std::string& name, const std::function<double(const Vector&)>& f) {
  const Matrix xy = phs::block_coordinates(s, name);
  Vector v(xy.rows());
  for (Eigen::Index i = 0; i < xy.rows(); ++i) v(i) = f(xy.row(i).transpose());
  return v;
}

}  // namespace

TEST(StaggeredAxisTest, WeightsAndSizes) {
  const StaggeredAxis ax(4, 1.0);
  EXPECT_EQ(ax.size(AxisKind::Node), 5);
  EXPECT_EQ(ax.size(AxisKind::Cell), 4);
  EXPECT_EQ(ax.size(AxisKind::Staggered), 6);
  EXPECT_DOUBLE_EQ(ax.boundary_weight(), 1.0 / 16.0);
  EXPECT_DOUBLE_EQ(ax.weights(AxisKind::Node).sum(), 1.0);
  EXPECT_DOUBLE_EQ(ax.weights(AxisKind::Cell).sum(), 1.0);
  EXPECT_THROW(StaggeredAxis::target(Factor::G, AxisKind::Cell), phs::InvalidArgument);
}

TEST(StaggeredAxisTest, SummationByParts) {
  for (int n : {2, 3, 7}) {
    const StaggeredAxis ax(n, 2.5);
    const Matrix mn = ax.weights(AxisKind::Node).asDiagonal();
    const Matrix ms = ax.weights(AxisKind::Staggered).asDiagonal();
    const Matrix g = ax.op(Factor::G, AxisKind::Node);
    const Matrix d = ax.op(Factor::D, AxisKind::Staggered);
    const Matrix b = ax.boundary();
    EXPECT_LE(phs::max_abs(g.transpose() * ms + mn * d - b), 1e-13);
    EXPECT_LE(phs::max_abs(d.transpose() * mn + ms * g - b.transpose()), 1e-13);
    EXPECT_LE(phs::max_abs(g - ax.op(Factor::P, AxisKind::Cell) * ax.cell_difference()), 1e-13);
  }
}

TEST(WaveBuilderTest, SmallestDims) {
  const PortSystem s = wave(GridSpec::line(4));
  EXPECT_EQ(s.x1.dim(), 5);
  EXPECT_EQ(s.x2.dim(), 6);
  EXPECT_EQ(s.u1.dim(), 2);
  EXPECT_EQ(s.u2.dim(), 0);
  EXPECT_LE(phs::green_residual(s), 1e-15 * phs::green_scale(s) * 10);
}

TEST(WaveBuilderTest, PairwiseIdentityOnThreeNodes) {
  const PortSystem s = wave(GridSpec::line(2));
  // boundary term e1 * (e2 . n): left normal -1 on the first boundary point, right +1 on the last
  Matrix expected = Matrix::Zero(3, 4);
  expected(0, 0) = -1.0;
  expected(2, 3) = 1.0;
  EXPECT_LE(phs::max_abs(green_lhs(s) - expected), 1e-14);
  EXPECT_LE(phs::max_abs(s.gamma1.transpose() * s.u1.gram() * s.beta2 - expected), 1e-14);
}

TEST(WaveBuilderTest, ConstantsInKernelOfGradient) {
  for (const GridSpec& g : {GridSpec::line(5), GridSpec::square(3, 4)}) {
    const PortSystem s = wave(g);
    EXPECT_LE(phs::max_abs(s.L * Vector::Ones(s.x1.dim())), 1e-12);
  }
}

TEST(WaveBuilderTest, ClosedFormDims) {
  for (int n : {2, 3, 10}) {
    const PortSystem s = wave(GridSpec::line(n));
    EXPECT_EQ(s.x1.dim(), n + 1);
    EXPECT_EQ(s.x2.dim(), n + 2);
    expect_exact(s);
  }
  for (auto [nx, ny] : {std::pair{2, 2}, std::pair{3, 5}}) {
    const PortSystem s = wave(GridSpec::square(nx, ny));
    EXPECT_EQ(s.x1.dim(), (nx + 1) * (ny + 1));
    EXPECT_EQ(s.x2.dim(), (nx + 2) * (ny + 1) + (nx + 1) * (ny + 2));
    EXPECT_EQ(s.u1.dim(), 2 * (nx + ny));
    expect_exact(s);
  }
}

TEST(WaveBuilderTest, RejectsBadInput) {
  EXPECT_THROW(wave(GridSpec::line(1)), phs::InvalidArgument);
  EXPECT_THROW(CoefficientField("rho", -1.0), phs::InvalidArgument);
  EXPECT_THROW(CoefficientField("rho", 0.0), phs::InvalidArgument);
  EXPECT_NO_THROW(CoefficientField("eta", 0.0, true));
  EXPECT_THROW(phs::build_wave(GridSpec::line(4), CoefficientField("rho", Vector::Ones(3)), one("T")),
               phs::InvalidArgument);
}

TEST(WaveBuilderTest, VariableCoefficientsKeepIdentity) {
  Vector rho = Vector::LinSpaced(9, 1.0, 3.0);
  const PortSystem s = phs::build_wave(GridSpec::line(8), CoefficientField("rho", rho), one("T"));
  expect_exact(s);
}

TEST(ElasticityBuilderTest, ExactAndDims) {
  for (auto [nx, ny] : {std::pair{4, 4}, std::pair{3, 5}}) {
    const PortSystem s = elasticity(nx, ny);
    expect_exact(s);
    EXPECT_EQ(s.x1.dim(), (nx + 1) * (ny + 2) + (nx + 2) * (ny + 1));
    EXPECT_EQ(s.x2.dim(), 2 * (nx + 2) * (ny + 2) + (nx + 1) * (ny + 1));
    EXPECT_EQ(s.u1.dim(), 0);
    EXPECT_GT(s.u2.dim(), 0);
  }
}

TEST(ElasticityBuilderTest, RigidMotionsInKernel) {
  const PortSystem s = elasticity(4, 4);
  const auto vx = *s.find_block("vx");
  const auto vy = *s.find_block("vy");
  Vector tx = Vector::Zero(s.x1.dim());
  tx.segment(vx.offset, vx.size).setOnes();
  EXPECT_LE(phs::max_abs(s.L * tx), 1e-12);
  Vector ty = Vector::Zero(s.x1.dim());
  ty.segment(vy.offset, vy.size).setOnes();
  EXPECT_LE(phs::max_abs(s.L * ty), 1e-12);
  Vector rot(s.x1.dim());
  rot.segment(vx.offset, vx.size) = block_values(s, "vx", [](const Vector& p) { return -p(1); });
  rot.segment(vy.offset, vy.size) = block_values(s, "vy", [](const Vector& p) { return p(0); });
  EXPECT_LE(phs::max_abs(s.L * rot), 1e-12);
}

TEST(ElasticityBuilderTest, RejectsIndefiniteStiffness) {
  EXPECT_THROW(phs::build_elasticity_2d(GridSpec::square(3, 3), one("rho"), phs::ElasticStiffness::voigt(1, 1, 2, 1)),
               phs::InvalidArgument);
}

TEST(BeamBuilderTest, DimsAndExactness) {
  const PortSystem s = beam(6);
  EXPECT_EQ(s.u1.dim(), 4);
  EXPECT_EQ(s.u2.dim(), 0);
  EXPECT_EQ(s.x1.dim(), 8);
  EXPECT_EQ(s.x2.dim(), 8);
  EXPECT_LE(phs::green_residual(s), 1e-13 * phs::green_scale(s));
  EXPECT_THROW(beam(3), phs::InvalidArgument);
}

TEST(BeamBuilderTest, AffineInKernel) {
  const PortSystem s = beam(7, 2.0);
  const Vector v = block_values(s, "velocity", [](const Vector& p) { return 0.3 - 1.7 * p(0); });
  EXPECT_LE(phs::max_abs(s.L * v), 1e-10);
}

TEST(BeamBuilderTest, QuadraticHandValue) {
  const PortSystem s = beam(4);
  const Vector e1 = block_values(s, "velocity", [](const Vector& p) { return 0.5 * p(0) * p(0); });
  const Vector e2 = Vector::Ones(s.x2.dim());
  // slope traces of x^2/2 at the ends times the unit moment: (l - h/4) - h/4
  const double hand = 1.0 - 0.125;
  EXPECT_NEAR(e1.dot(green_lhs(s) * e2), hand, 1e-13);
  EXPECT_NEAR((s.gamma1 * e1).dot(s.u1.gram() * s.beta2 * e2), hand, 1e-13);
}

TEST(MaxwellBuilderTest, ExactAndDims) {
  const PortSystem s = maxwell(2, 2, 2);
  expect_exact(s);
  const PortSystem t = maxwell(2, 3, 4);
  expect_exact(t);
  const int nx = 2, ny = 3, nz = 4;
  const int edges = nx * (ny + 1) * (nz + 1) + (nx + 1) * ny * (nz + 1) + (nx + 1) * (ny + 1) * nz;
  const int hs = (nx + 1) * (ny + 2) * (nz + 2) + (nx + 2) * (ny + 1) * (nz + 2) + (nx + 2) * (ny + 2) * (nz + 1);
  EXPECT_EQ(t.x1.dim(), edges);
  EXPECT_EQ(t.x2.dim(), hs + edges);
  EXPECT_EQ(t.u1.dim(), 0);
  EXPECT_THROW(phs::build_maxwell_3d(GridSpec::cube(2, 2, 2), one("eps"), one("mu"), CoefficientField("eta", -1.0, true)),
               phs::InvalidArgument);
}

TEST(MaxwellBuilderTest, CurlOfGradientVanishes) {
  const int nx = 2, ny = 3, nz = 2;
  const PortSystem s = maxwell(nx, ny, nz);
  const StaggeredAxis ax(nx, 1.0), ay(ny, 1.0), az(nz, 1.0);
  const Matrix ix = Matrix::Identity(nx + 1, nx + 1), iy = Matrix::Identity(ny + 1, ny + 1),
               iz = Matrix::Identity(nz + 1, nz + 1);
  const Matrix grad_x = phs::kron(phs::kron(ax.cell_difference(), iy), iz);
  const Matrix grad_y = phs::kron(phs::kron(ix, ay.cell_difference()), iz);
  const Matrix grad_z = phs::kron(phs::kron(ix, iy), az.cell_difference());
  std::mt19937 rng(9);
  const Vector phi = oracle::random_matrix(rng, (nx + 1) * (ny + 1) * (nz + 1), 1).col(0);
  Vector e(s.x1.dim());
  e << grad_x * phi, grad_y * phi, grad_z * phi;
  const auto hz = *s.find_block("Hz");
  const auto hx = *s.find_block("Hx");
  const Vector curl = s.L * e;
  const Eigen::Index h_rows = hz.offset + hz.size - hx.offset;
  EXPECT_LE(phs::max_abs(curl.segment(hx.offset - s.x1.dim(), h_rows)), 1e-10);
}

TEST(MaxwellBuilderTest, InteriorEdgeHasNoBoundaryPairing) {
  const PortSystem s = maxwell(2, 2, 2);
  Vector e1 = Vector::Zero(s.x1.dim());
  e1(4) = 1.0;  // Ex at cell 0, y node 1, z node 1
  Vector e2 = Vector::Zero(s.x2.dim());
  const auto hx = *s.find_block("Hx");
  const auto hz = *s.find_block("Hz");
  e2.segment(hx.offset - s.x1.dim(), hz.offset + hz.size - hx.offset).setOnes();
  EXPECT_NEAR(e1.dot(green_lhs(s) * e2), 0.0, 1e-12);
}

TEST(BuilderGramTest, DiagonalPositive) {
  for (const PortSystem& s : {wave(GridSpec::line(3)), wave(GridSpec::square(2, 3)), elasticity(3, 2), beam(5), maxwell(2, 2, 2)}) {
    expect_positive_diagonal(s.x1.gram());
    expect_positive_diagonal(s.x2.gram());
    expect_positive_diagonal(s.u1.gram());
    expect_positive_diagonal(s.u2.gram());
  }
}

TEST(BuilderRefinementTest, InvariantsHoldUnderRefinement) {
  for (int n : {2, 4, 8, 16, 32}) {
    const PortSystem s = wave(GridSpec::line(n));
    expect_exact(s);
    EXPECT_TRUE(phs::check_bcs_conditions(s).all_pass()) << n;
  }
  for (int n : {4, 8, 16}) expect_exact(beam(n));
}

TEST(BlockCoordinatesTest, WaveNodes) {
  const PortSystem s = wave(GridSpec::line(4));
  const Matrix x = phs::block_coordinates(s, "velocity");
  ASSERT_EQ(x.rows(), 5);
  EXPECT_DOUBLE_EQ(x(4, 0), 1.0);
  const Matrix st = phs::block_coordinates(s, "stress");
  EXPECT_DOUBLE_EQ(st(1, 0), 0.125);
  EXPECT_THROW(phs::block_coordinates(s, "nope"), phs::InvalidArgument);
}
