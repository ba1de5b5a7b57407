#pragma once

// Mimetic staggered-grid builders. Every field is a tensor product of 1D axis
// kinds; operators are Kronecker products of 1D factors whose discrete
// integration-by-parts identities are exact, so the Green identity of the
// assembled PortSystem closes to rounding.

#include "phs/port_system.hpp"

#include <optional>
#include <string>
#include <vector>

namespace phs {

/// 1D point sets: nodes (n+1), cells (n), extended staggered (boundary point,
/// n midpoints, boundary point).
enum class AxisKind { Node, Cell, Staggered };

/// 1D difference factors. P embeds cells into the staggered set, Pt is its
/// transpose, G = P * d is the node-to-staggered difference and D the
/// staggered-to-node difference.
enum class Factor { I, P, Pt, G, D };

class StaggeredAxis {
 public:
  StaggeredAxis(int cells, double length);

  int cells() const { return n_; }
  double length() const { return length_; }
  double h() const { return h_; }
  /// Quadrature weight of the two boundary points of the staggered set.
  double boundary_weight() const { return wb_; }

  Eigen::Index size(AxisKind kind) const;
  Vector weights(AxisKind kind) const;
  Vector coordinates(AxisKind kind) const;

  /// Kind reached by applying f to a field of kind `from`; throws InvalidArgument if f does not apply.
  static AxisKind target(Factor f, AxisKind from);
  /// Matrix of f acting on fields of kind `from`.
  Matrix op(Factor f, AxisKind from) const;
  /// Node-to-cell difference d, with G = P * d.
  Matrix cell_difference() const;
  /// Node-by-staggered boundary matrix: -1 at (0, 0), +1 at (n, n+1).
  Matrix boundary() const;

 private:
  int n_;
  double length_;
  double h_;
  double wb_;
};

/// Per-degree-of-freedom material values; a single value means uniform.
struct CoefficientField {
  CoefficientField() = default;
  /// Throws InvalidArgument on empty, non-finite, or nonpositive values (zero allowed when allow_zero).
  CoefficientField(std::string name, Vector values, bool allow_zero = false);
  CoefficientField(std::string name, double value, bool allow_zero = false);

  std::string name;
  Vector values;

  /// Values expanded to n entries; throws InvalidArgument when the size is neither 1 nor n.
  Vector expand(Eigen::Index n) const;
  double min() const { return values.minCoeff(); }
  double max() const { return values.maxCoeff(); }
};

/// Orthotropic plane stiffness in Voigt form: c11, c22, c12 at stress cells, c66 at corners.
struct ElasticStiffness {
  Vector c11, c22, c12, c66;

  static ElasticStiffness lame(double lambda, double mu);
  static ElasticStiffness voigt(double c11, double c22, double c12, double c66);
  /// Throws InvalidArgument unless every pointwise 2x2 normal block and c66 are positive-definite.
  void validate() const;
};

/// Velocity on primal nodes, stress on the extended staggered grid; boundary velocity control.
PortSystem build_wave(const GridSpec& grid, const CoefficientField& rho, const CoefficientField& tension);

/// Virieux layout: vx on node x staggered, vy on staggered x node, normal stresses on
/// staggered x staggered, shear stress on nodes; boundary traction control.
PortSystem build_elasticity_2d(const GridSpec& grid, const CoefficientField& rho, const ElasticStiffness& stiffness);

/// Biharmonic beam with value and slope traces at both ends (U1 of dimension 4).
PortSystem build_beam_1d(const GridSpec& grid, const CoefficientField& mu, const CoefficientField& bending);

/// Yee layout with a resistive current block on the E layout; tangential H-trace control.
PortSystem build_maxwell_3d(const GridSpec& grid, const CoefficientField& eps, const CoefficientField& mu_mag,
                            const std::optional<CoefficientField>& eta_inv = std::nullopt);

/// Coordinates of every DOF of a named block, one row per DOF, one column per axis.
Matrix block_coordinates(const PortSystem& sys, const std::string& block);

}  // namespace phs
