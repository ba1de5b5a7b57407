#pragma once

// Boundary control system layer over a PortSystem: Green identity residual,
// kernel restriction, resolvent conditions, J = A + B G splitting and the
// extended structure operator [[A, B], [-C, 0]].

#include "phs/port_system.hpp"

#include <string>
#include <vector>

namespace phs {

/// ||L||_inf + ||K||_inf, or 1 for an all-zero system.
double green_scale(const PortSystem& sys);

/// ||L^T M2 - M1 K - gamma1^T N1 beta2 - beta1^T N2 gamma2||_inf.
double green_residual(const PortSystem& sys);

struct KernelRestriction {
  Matrix a_red;  // Z^T M J Z
  Matrix z;      // M-orthonormal basis of ker gamma1 x ker gamma2
};

/// Throws StructuralError naming gamma1 or gamma2 when that trace map is not onto.
KernelRestriction kernel_restriction(const PortSystem& sys);

struct BcsCondition {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct BcsReport {
  Eigen::Index rank_g = 0;
  Eigen::Index dim_u = 0;
  Eigen::Index kernel_dim = 0;
  double skew_residual = 0.0;
  double cond_minus = 0.0;  // cond(I - A_red)
  double cond_plus = 0.0;   // cond(I + A_red)
  Eigen::Index resolvent_kernel_dim = 0;  // dim(ker(I - J) on ker G)
  std::vector<BcsCondition> conditions;

  bool all_pass() const;
};

/// Conditions (i)-(iv) with resolvent parameter 1, plus invertibility of I + A_red.
BcsReport check_bcs_conditions(const PortSystem& sys);

struct OperatorSplit {
  Matrix A;
  Matrix B;
  Matrix H;  // right inverse of G
};

/// Gram-weighted projection split: H = M^-1 G^T (G M^-1 G^T)^-1, A = J (I - H G), B = J H.
/// Throws StructuralError when G is rank-deficient.
OperatorSplit split_operator(const Matrix& j, const Matrix& g, const GramSpace& state);
OperatorSplit split_operator(const PortSystem& sys);

/// Collocated split used for the extended operator: B = M^-1 C^T N, A = J - B G.
/// M A is skew whenever the Green identity holds, and B = (J - A) H for every right inverse H.
OperatorSplit collocated_split(const PortSystem& sys);

struct ExtendedOperator {
  Matrix A;
  Matrix B;
  Matrix C;
  Matrix full;  // [[A, B], [-C, 0]]
  GramSpace state;
  GramSpace input;
  GramSpace extended;  // blkdiag(state, input)
  std::string label;

  Eigen::Index state_dim() const { return A.rows(); }
  Eigen::Index input_dim() const { return B.cols(); }
  /// check_skew_symmetric_like(full, extended).
  double skew_residual() const;
};

/// Refuses (StructuralError) when green_residual > tol * green_scale.
ExtendedOperator assemble_extended(const PortSystem& sys, double tol = 1e-12);

/// ||J - (A + B G)||_inf.
double split_residual(const Matrix& j, const OperatorSplit& split, const Matrix& g);

/// True when B maps U1 only into X2 and U2 only into X1 (exact zeros elsewhere).
bool is_block_antidiagonal(const Matrix& b, const PortSystem& sys);

}  // namespace phs
