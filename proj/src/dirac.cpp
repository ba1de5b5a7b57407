#include "phs/dirac.hpp"

#include "phs/errors.hpp"

#include <algorithm>
#include <sstream>

namespace phs {

namespace {

constexpr double kRankTol = 1e-10;
constexpr double kKernelTol = 1e-12;

}  // namespace

GramSpace::GramSpace(Matrix gram) : gram_(std::move(gram)) {
  if (gram_.rows() != gram_.cols()) throw DimensionMismatch("gram matrix must be square");
  if (gram_.size() == 0) return;
  if ((gram_ - gram_.transpose()).cwiseAbs().maxCoeff() != 0.0) {
    throw StructuralError("gram matrix is not symmetric");
  }
  Eigen::LLT<Matrix> llt(gram_);
  if (llt.info() != Eigen::Success) throw StructuralError("gram matrix is not positive-definite");
}

GramSpace GramSpace::identity(Eigen::Index n) { return GramSpace(Matrix::Identity(n, n)); }

GramSpace GramSpace::diagonal(const Vector& weights) { return GramSpace(Matrix(weights.asDiagonal())); }

double GramSpace::duality(const Vector& flow, const Vector& effort) const {
  if (flow.size() != dim() || effort.size() != dim()) {
    throw DimensionMismatch("duality: vector length does not match space dimension");
  }
  return flow.dot(gram_ * effort);
}

BondElement::BondElement(Vector flow_in, Vector effort_in) : flow(std::move(flow_in)), effort(std::move(effort_in)) {
  if (flow.size() != effort.size()) throw DimensionMismatch("bond element: flow and effort differ in length");
}

SubspaceBasis::SubspaceBasis(Matrix basis) : basis_(std::move(basis)) {
  if (basis_.cols() > 0 && numerical_rank(basis_, kRankTol) != basis_.cols()) {
    throw StructuralError("subspace basis is rank-deficient");
  }
}

double bond_pairing(const BondElement& b1, const BondElement& b2, const GramSpace& space) {
  if (b1.flow.size() != space.dim() || b2.flow.size() != space.dim()) {
    std::ostringstream os;
    os << "bond_pairing: dimension mismatch (space " << space.dim() << ", elements " << b1.flow.size() << " and "
       << b2.flow.size() << ")";
    throw DimensionMismatch(os.str());
  }
  return space.duality(b1.flow, b2.effort) + space.duality(b2.flow, b1.effort);
}

Matrix bond_form(const GramSpace& space) {
  const auto n = space.dim();
  Matrix omega = Matrix::Zero(2 * n, 2 * n);
  omega.topRightCorner(n, n) = space.gram();
  omega.bottomLeftCorner(n, n) = space.gram();
  return omega;
}

SubspaceBasis orthogonal_companion(const SubspaceBasis& d, const GramSpace& space) {
  if (d.ambient_dim() != 2 * space.dim()) {
    throw DimensionMismatch("orthogonal_companion: subspace does not live in the doubled bond space");
  }
  const Matrix q = orthonormal_span(d.basis(), kRankTol);
  const Matrix pairing = (bond_form(space) * q).transpose();
  return SubspaceBasis(null_space(pairing, kKernelTol));
}

double subspace_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("subspace_distance: ambient dimensions differ");
  const Matrix qa = orthonormal_span(a, kRankTol);
  const Matrix qb = orthonormal_span(b, kRankTol);
  if (qa.cols() != qb.cols()) return 1.0;
  if (qa.cols() == 0) return 0.0;
  const Matrix ra = qb - qa * (qa.transpose() * qb);
  const Matrix rb = qa - qb * (qb.transpose() * qa);
  Eigen::BDCSVD<Matrix> sa(ra);
  Eigen::BDCSVD<Matrix> sb(rb);
  return std::max(sa.singularValues()(0), sb.singularValues()(0));
}

bool is_dirac(const SubspaceBasis& d, const GramSpace& space, double tol) {
  const SubspaceBasis companion = orthogonal_companion(d, space);
  if (companion.rank() != d.rank()) return false;
  return subspace_distance(d.basis(), companion.basis()) <= tol;
}

SubspaceBasis graph_subspace(const Matrix& j) {
  Matrix basis(j.rows() + j.cols(), j.cols());
  basis << j, Matrix::Identity(j.cols(), j.cols());
  return SubspaceBasis(std::move(basis));
}

double check_skew_symmetric_like(const Matrix& j, const GramSpace& space) {
  require_shape(j, space.dim(), space.dim(), "check_skew_symmetric_like");
  const Matrix mj = space.gram() * j;
  return inf_norm(mj + mj.transpose());
}

Matrix extended_structure_matrix(const Matrix& j, const Matrix& b, double tol) {
  return extended_structure_matrix(j, b, GramSpace::identity(j.rows()), GramSpace::identity(b.cols()), tol);
}

Matrix extended_structure_matrix(const Matrix& j, const Matrix& b, const GramSpace& state, const GramSpace& input,
                                 double tol) {
  require_shape(j, state.dim(), state.dim(), "extended_structure_matrix: J");
  require_shape(b, state.dim(), input.dim(), "extended_structure_matrix: B");
  const double residual = check_skew_symmetric_like(j, state);
  if (residual > tol * std::max(1.0, inf_norm(state.gram() * j))) {
    std::ostringstream os;
    os << "extended_structure_matrix: J is not skew in the state gram (residual " << residual << ")";
    throw StructuralError(os.str());
  }
  const auto n = j.rows();
  const auto m = b.cols();
  Matrix out = Matrix::Zero(n + m, n + m);
  out.topLeftCorner(n, n) = j;
  out.topRightCorner(n, m) = b;
  if (m > 0) {
    out.bottomLeftCorner(m, n) = -input.gram().llt().solve(b.transpose() * state.gram());
  }
  return out;
}

}  // namespace phs
