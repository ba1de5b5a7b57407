#include "phs/port_system.hpp"

#include "phs/errors.hpp"

#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace phs {

void PortSystem::validate_dimensions() const {
  const auto n1 = x1.dim();
  const auto n2 = x2.dim();
  const auto m1 = u1.dim();
  const auto m2 = u2.dim();
  require_shape(L, n2, n1, "PortSystem.L");
  require_shape(K, n1, n2, "PortSystem.K");
  require_shape(gamma1, m1, n1, "PortSystem.gamma1");
  require_shape(gamma2, m2, n2, "PortSystem.gamma2");
  require_shape(beta1, m2, n1, "PortSystem.beta1");
  require_shape(beta2, m1, n2, "PortSystem.beta2");
}

Matrix PortSystem::state_gram() const { return block_diag({&x1.gram(), &x2.gram()}); }

Matrix PortSystem::input_gram() const { return block_diag({&u1.gram(), &u2.gram()}); }

Matrix PortSystem::structure_matrix() const {
  const auto n1 = x1.dim();
  const auto n2 = x2.dim();
  Matrix j = Matrix::Zero(n1 + n2, n1 + n2);
  j.topRightCorner(n1, n2) = -K;
  j.bottomLeftCorner(n2, n1) = L;
  return j;
}

Matrix PortSystem::boundary_map() const { return block_diag({&gamma1, &gamma2}); }

Matrix PortSystem::observation_map() const {
  const auto n1 = x1.dim();
  const auto n2 = x2.dim();
  const auto m1 = u1.dim();
  const auto m2 = u2.dim();
  Matrix c = Matrix::Zero(m1 + m2, n1 + n2);
  c.block(0, n1, m1, n2) = beta2;
  c.block(m1, 0, m2, n1) = beta1;
  return c;
}

std::optional<FieldBlock> PortSystem::find_block(const std::string& name) const {
  for (const auto& b : x1_blocks) {
    if (b.name == name) return b;
  }
  for (auto b : x2_blocks) {
    if (b.name == name) {
      b.offset += x1.dim();
      return b;
    }
  }
  return std::nullopt;
}

namespace {

const char* kMagic = "phs-port-system";

void write_matrix(std::ostream& out, const std::string& name, const Matrix& m) {
  out << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ' ';
      out << m(i, j);
    }
    out << '\n';
  }
}

Layout parse_layout(const std::string& s) {
  for (Layout l : {Layout::PrimalNode, Layout::CellCenter, Layout::Edge, Layout::Face, Layout::ExtendedStaggered}) {
    if (to_string(l) == s) return l;
  }
  throw InvalidArgument("snapshot: unknown layout '" + s + "'");
}

}  // namespace

void write_snapshot(std::ostream& out, const PortSystem& sys) {
  sys.validate_dimensions();
  const auto old_flags = out.flags();
  const auto old_precision = out.precision();
  out << std::setprecision(17);
  out << kMagic << " 1\n";
  out << "label " << sys.label << '\n';
  if (sys.grid) {
    out << "grid " << sys.grid->dimension;
    for (int c : sys.grid->cells_per_axis) out << ' ' << c;
    for (double l : sys.grid->lengths_per_axis) out << ' ' << l;
    out << '\n';
  }
  for (const auto& b : sys.x1_blocks) {
    out << "block X1 " << b.name << ' ' << b.offset << ' ' << b.size << ' ' << to_string(b.layout) << '\n';
  }
  for (const auto& b : sys.x2_blocks) {
    out << "block X2 " << b.name << ' ' << b.offset << ' ' << b.size << ' ' << to_string(b.layout) << '\n';
  }
  write_matrix(out, "X1.gram", sys.x1.gram());
  write_matrix(out, "X2.gram", sys.x2.gram());
  write_matrix(out, "U1.gram", sys.u1.gram());
  write_matrix(out, "U2.gram", sys.u2.gram());
  write_matrix(out, "L", sys.L);
  write_matrix(out, "K", sys.K);
  write_matrix(out, "gamma1", sys.gamma1);
  write_matrix(out, "gamma2", sys.gamma2);
  write_matrix(out, "beta1", sys.beta1);
  write_matrix(out, "beta2", sys.beta2);
  out << "end\n";
  out.flags(old_flags);
  out.precision(old_precision);
}

PortSystem read_snapshot(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kMagic || version != 1) {
    throw InvalidArgument("snapshot: missing or unsupported header");
  }
  PortSystem sys;
  std::map<std::string, Matrix> matrices;
  std::string keyword;
  bool finished = false;
  while (in >> keyword) {
    if (keyword == "end") {
      finished = true;
      break;
    }
    if (keyword == "label") {
      in >> sys.label;
    } else if (keyword == "grid") {
      GridSpec g;
      in >> g.dimension;
      if (g.dimension < 1 || g.dimension > 3) throw InvalidArgument("snapshot: bad grid dimension");
      g.cells_per_axis.resize(g.dimension);
      g.lengths_per_axis.resize(g.dimension);
      for (auto& c : g.cells_per_axis) in >> c;
      for (auto& l : g.lengths_per_axis) in >> l;
      sys.grid = g;
    } else if (keyword == "block") {
      std::string space;
      std::string layout;
      FieldBlock b;
      in >> space >> b.name >> b.offset >> b.size >> layout;
      b.layout = parse_layout(layout);
      (space == "X1" ? sys.x1_blocks : sys.x2_blocks).push_back(b);
    } else if (keyword == "matrix") {
      std::string name;
      Eigen::Index rows = 0;
      Eigen::Index cols = 0;
      in >> name >> rows >> cols;
      if (!in || rows < 0 || cols < 0) throw InvalidArgument("snapshot: bad matrix header");
      Matrix m(rows, cols);
      for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
          if (!(in >> m(i, j))) throw InvalidArgument("snapshot: truncated matrix '" + name + "'");
        }
      }
      matrices[name] = std::move(m);
    } else {
      throw InvalidArgument("snapshot: unknown section '" + keyword + "'");
    }
    if (!in) throw InvalidArgument("snapshot: malformed section '" + keyword + "'");
  }
  if (!finished) throw InvalidArgument("snapshot: missing 'end'");
  auto take = [&](const std::string& name) {
    auto it = matrices.find(name);
    if (it == matrices.end()) throw InvalidArgument("snapshot: missing matrix '" + name + "'");
    return it->second;
  };
  sys.x1 = GramSpace(take("X1.gram"));
  sys.x2 = GramSpace(take("X2.gram"));
  sys.u1 = GramSpace(take("U1.gram"));
  sys.u2 = GramSpace(take("U2.gram"));
  sys.L = take("L");
  sys.K = take("K");
  sys.gamma1 = take("gamma1");
  sys.gamma2 = take("gamma2");
  sys.beta1 = take("beta1");
  sys.beta2 = take("beta2");
  sys.validate_dimensions();
  return sys;
}

}  // namespace phs
