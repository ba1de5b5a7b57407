#include "phs/grid.hpp"

#include "phs/errors.hpp"

#include <cmath>
#include <sstream>

namespace phs {

std::string to_string(Layout layout) {
  switch (layout) {
    case Layout::PrimalNode:
      return "primal-node";
    case Layout::CellCenter:
      return "cell-center";
    case Layout::Edge:
      return "edge";
    case Layout::Face:
      return "face";
    case Layout::ExtendedStaggered:
      return "extended-staggered";
  }
  return "unknown";
}

void GridSpec::validate() const {
  if (dimension < 1 || dimension > 3) throw InvalidArgument("grid dimension must be 1, 2 or 3");
  if (static_cast<int>(cells_per_axis.size()) != dimension ||
      static_cast<int>(lengths_per_axis.size()) != dimension) {
    throw InvalidArgument("grid: cells_per_axis and lengths_per_axis must have one entry per axis");
  }
  for (int a = 0; a < dimension; ++a) {
    if (cells_per_axis[a] < 2) {
      std::ostringstream os;
      os << "grid too small: axis " << a << " has " << cells_per_axis[a] << " cells (need >= 2)";
      throw InvalidArgument(os.str());
    }
    if (!(lengths_per_axis[a] > 0.0) || !std::isfinite(lengths_per_axis[a])) {
      std::ostringstream os;
      os << "grid: axis " << a << " length must be positive";
      throw InvalidArgument(os.str());
    }
  }
}

GridSpec GridSpec::line(int cells, double length) { return GridSpec{1, {cells}, {length}}; }

GridSpec GridSpec::square(int nx, int ny, double lx, double ly) { return GridSpec{2, {nx, ny}, {lx, ly}}; }

GridSpec GridSpec::cube(int nx, int ny, int nz, double lx, double ly, double lz) {
  return GridSpec{3, {nx, ny, nz}, {lx, ly, lz}};
}

}  // namespace phs
