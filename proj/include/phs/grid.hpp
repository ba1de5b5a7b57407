#pragma once

#include <string>
#include <vector>

namespace phs {

enum class Layout { PrimalNode, CellCenter, Edge, Face, ExtendedStaggered };

std::string to_string(Layout layout);

/// Uniform tensor grid on [0, L_1] x ... x [0, L_d].
struct GridSpec {
  int dimension = 1;
  std::vector<int> cells_per_axis;
  std::vector<double> lengths_per_axis;

  /// Throws InvalidArgument unless 1 <= dimension <= 3, every axis has >= 2 cells
  /// and a positive finite length.
  void validate() const;

  double spacing(int axis) const { return lengths_per_axis.at(axis) / cells_per_axis.at(axis); }

  static GridSpec line(int cells, double length = 1.0);
  static GridSpec square(int nx, int ny, double lx = 1.0, double ly = 1.0);
  static GridSpec cube(int nx, int ny, int nz, double lx = 1.0, double ly = 1.0, double lz = 1.0);
};

}  // namespace phs
