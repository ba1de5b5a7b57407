#pragma once

#include "phs/dirac.hpp"
#include "phs/grid.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace phs {

/// A named contiguous range of degrees of freedom inside X1 or X2.
struct FieldBlock {
  std::string name;
  Eigen::Index offset = 0;
  Eigen::Index size = 0;
  Layout layout = Layout::PrimalNode;
};

/// Finite-dimensional (L, K, gamma, beta) realization with its Gram spaces.
///
/// The abstract Green identity reads, as a matrix equation,
///   L^T M2 - M1 K = gamma1^T N1 beta2 + beta1^T N2 gamma2,
/// where M1, M2 are the state Grams and N1, N2 the boundary Grams.
/// beta1 maps X1 into U2 coordinates, beta2 maps X2 into U1 coordinates.
struct PortSystem {
  GramSpace x1, x2, u1, u2;
  Matrix L;       // X1 -> X2
  Matrix K;       // X2 -> X1
  Matrix gamma1;  // X1 -> U1
  Matrix gamma2;  // X2 -> U2
  Matrix beta1;   // X1 -> U2
  Matrix beta2;   // X2 -> U1
  std::string label;
  std::optional<GridSpec> grid;
  std::vector<FieldBlock> x1_blocks;
  std::vector<FieldBlock> x2_blocks;

  /// Throws DimensionMismatch when operator shapes disagree with the spaces.
  void validate_dimensions() const;

  Eigen::Index state_dim() const { return x1.dim() + x2.dim(); }
  Eigen::Index input_dim() const { return u1.dim() + u2.dim(); }

  Matrix state_gram() const;
  Matrix input_gram() const;
  /// J = [[0, -K], [L, 0]].
  Matrix structure_matrix() const;
  /// G = blkdiag(gamma1, gamma2).
  Matrix boundary_map() const;
  /// C = [[0, beta2], [beta1, 0]], mapping X to U1 x U2.
  Matrix observation_map() const;

  /// Block lookup over X1 followed by X2 (offsets in the stacked state).
  std::optional<FieldBlock> find_block(const std::string& name) const;
};

/// Text snapshot: named sections of row-major arrays at 17 significant digits.
void write_snapshot(std::ostream& out, const PortSystem& sys);
PortSystem read_snapshot(std::istream& in);

}  // namespace phs
