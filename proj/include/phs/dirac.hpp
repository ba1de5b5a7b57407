#pragma once

// Finite-dimensional bond-space algebra: pairing, orthogonal companion,
// Dirac-structure test, graphs of structure matrices.
//
// A bond element is a pair (flow, effort) in F x E with E = R^n and the
// duality <f, e> = f^T * gram * e. Subspaces of the bond space are stored as
// column bases of the stacked vector [flow; effort] (length 2n).

#include "phs/linalg.hpp"

namespace phs {

class GramSpace {
 public:
  GramSpace() = default;
  /// Requires an exactly symmetric, positive-definite matrix. Zero dimension is allowed.
  explicit GramSpace(Matrix gram);

  static GramSpace identity(Eigen::Index n);
  static GramSpace diagonal(const Vector& weights);

  Eigen::Index dim() const { return gram_.rows(); }
  const Matrix& gram() const { return gram_; }

  /// <f, e> = f^T gram e.
  double duality(const Vector& flow, const Vector& effort) const;

 private:
  Matrix gram_;
};

struct BondElement {
  BondElement(Vector flow_in, Vector effort_in);

  Vector flow;
  Vector effort;
};

class SubspaceBasis {
 public:
  SubspaceBasis() = default;
  /// Columns must be linearly independent (relative rank tolerance 1e-10).
  explicit SubspaceBasis(Matrix basis);

  Eigen::Index ambient_dim() const { return basis_.rows(); }
  Eigen::Index rank() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }

 private:
  Matrix basis_;
};

/// <<b1, b2>> = <f1, e2> + <f2, e1>.
double bond_pairing(const BondElement& b1, const BondElement& b2, const GramSpace& space);

/// The matrix Omega = [[0, G], [G, 0]] with <<x, y>> = x^T Omega y on stacked vectors.
Matrix bond_form(const GramSpace& space);

/// All bond elements whose pairing with every element of `d` vanishes.
SubspaceBasis orthogonal_companion(const SubspaceBasis& d, const GramSpace& space);

/// Largest principal-angle sine between the two column spans; 1 when dimensions differ.
double subspace_distance(const Matrix& a, const Matrix& b);

bool is_dirac(const SubspaceBasis& d, const GramSpace& space, double tol = 1e-10);

/// Basis of {(J e, e)}: the stacked matrix [J; I].
SubspaceBasis graph_subspace(const Matrix& j);

/// ||gram*J + (gram*J)^T||_inf, zero iff <J e1, e2> = -<J e2, e1> for all efforts.
double check_skew_symmetric_like(const Matrix& j, const GramSpace& space);

/// [[J, B], [-B^T, 0]] for a skew J (identity Gram); throws StructuralError otherwise.
Matrix extended_structure_matrix(const Matrix& j, const Matrix& b, double tol = 1e-12);

/// Gram-weighted variant [[J, B], [-N^-1 B^T M, 0]], skew in blkdiag(M, N) when M J is skew.
Matrix extended_structure_matrix(const Matrix& j, const Matrix& b, const GramSpace& state,
                                 const GramSpace& input, double tol = 1e-12);

}  // namespace phs
