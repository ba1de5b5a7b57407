#include "phs/discretization.hpp"

#include "phs/errors.hpp"

#include <cmath>
#include <sstream>

namespace phs {

// ---------------------------------------------------------------- axis ----

StaggeredAxis::StaggeredAxis(int cells, double length)
    : n_(cells), length_(length), h_(length / cells), wb_(h_ * h_ / length) {
  if (cells < 1 || !(length > 0.0)) throw InvalidArgument("StaggeredAxis: need cells >= 1 and positive length");
}

Eigen::Index StaggeredAxis::size(AxisKind kind) const {
  switch (kind) {
    case AxisKind::Node:
      return n_ + 1;
    case AxisKind::Cell:
      return n_;
    case AxisKind::Staggered:
      return n_ + 2;
  }
  return 0;
}

Vector StaggeredAxis::weights(AxisKind kind) const {
  Vector w = Vector::Constant(size(kind), h_);
  if (kind == AxisKind::Node) {
    w(0) = w(n_) = 0.5 * h_;
  } else if (kind == AxisKind::Staggered) {
    w(0) = w(n_ + 1) = wb_;
  }
  return w;
}

Vector StaggeredAxis::coordinates(AxisKind kind) const {
  Vector x(size(kind));
  switch (kind) {
    case AxisKind::Node:
      for (int i = 0; i <= n_; ++i) x(i) = i * h_;
      x(n_) = length_;
      break;
    case AxisKind::Cell:
      for (int i = 0; i < n_; ++i) x(i) = (i + 0.5) * h_;
      break;
    case AxisKind::Staggered:
      x(0) = 0.0;
      for (int i = 0; i < n_; ++i) x(i + 1) = (i + 0.5) * h_;
      x(n_ + 1) = length_;
      break;
  }
  return x;
}

AxisKind StaggeredAxis::target(Factor f, AxisKind from) {
  switch (f) {
    case Factor::I:
      return from;
    case Factor::P:
      if (from == AxisKind::Cell) return AxisKind::Staggered;
      break;
    case Factor::Pt:
      if (from == AxisKind::Staggered) return AxisKind::Cell;
      break;
    case Factor::G:
      if (from == AxisKind::Node) return AxisKind::Staggered;
      break;
    case Factor::D:
      if (from == AxisKind::Staggered) return AxisKind::Node;
      break;
  }
  throw InvalidArgument("StaggeredAxis: factor does not act on this axis kind");
}

Matrix StaggeredAxis::cell_difference() const {
  Matrix d = Matrix::Zero(n_, n_ + 1);
  for (int j = 0; j < n_; ++j) {
    d(j, j) = -1.0 / h_;
    d(j, j + 1) = 1.0 / h_;
  }
  return d;
}

Matrix StaggeredAxis::op(Factor f, AxisKind from) const {
  const AxisKind to = target(f, from);
  Matrix m = Matrix::Zero(size(to), size(from));
  switch (f) {
    case Factor::I:
      m.setIdentity();
      break;
    case Factor::P:
      for (int j = 0; j < n_; ++j) m(j + 1, j) = 1.0;
      break;
    case Factor::Pt:
      for (int j = 0; j < n_; ++j) m(j, j + 1) = 1.0;
      break;
    case Factor::G:
      for (int j = 0; j < n_; ++j) {
        m(j + 1, j) = -1.0 / h_;
        m(j + 1, j + 1) = 1.0 / h_;
      }
      break;
    case Factor::D: {
      const Vector wn = weights(AxisKind::Node);
      for (int i = 0; i <= n_; ++i) {
        m(i, i) = -1.0 / wn(i);
        m(i, i + 1) = 1.0 / wn(i);
      }
      break;
    }
  }
  return m;
}

Matrix StaggeredAxis::boundary() const {
  Matrix b = Matrix::Zero(n_ + 1, n_ + 2);
  b(0, 0) = -1.0;
  b(n_, n_ + 1) = 1.0;
  return b;
}

// -------------------------------------------------------- coefficients ----

CoefficientField::CoefficientField(std::string name_in, Vector values_in, bool allow_zero)
    : name(std::move(name_in)), values(std::move(values_in)) {
  if (values.size() == 0) throw InvalidArgument("coefficient '" + name + "' has no values");
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = values(i);
    if (!std::isfinite(v) || v < 0.0 || (!allow_zero && v == 0.0)) {
      std::ostringstream os;
      os << "coefficient '" << name << "' must be " << (allow_zero ? "nonnegative" : "positive") << " and finite (entry "
         << i << " = " << v << ")";
      throw InvalidArgument(os.str());
    }
  }
}

CoefficientField::CoefficientField(std::string name_in, double value, bool allow_zero)
    : CoefficientField(std::move(name_in), Vector::Constant(1, value), allow_zero) {}

Vector CoefficientField::expand(Eigen::Index n) const {
  if (values.size() == 1) return Vector::Constant(n, values(0));
  if (values.size() != n) {
    std::ostringstream os;
    os << "coefficient '" << name << "' has " << values.size() << " values, expected 1 or " << n;
    throw InvalidArgument(os.str());
  }
  return values;
}

ElasticStiffness ElasticStiffness::lame(double lambda, double mu) {
  return voigt(lambda + 2.0 * mu, lambda + 2.0 * mu, lambda, mu);
}

ElasticStiffness ElasticStiffness::voigt(double c11, double c22, double c12, double c66) {
  ElasticStiffness s{Vector::Constant(1, c11), Vector::Constant(1, c22), Vector::Constant(1, c12),
                     Vector::Constant(1, c66)};
  return s;
}

void ElasticStiffness::validate() const {
  const Eigen::Index n = std::max({c11.size(), c22.size(), c12.size()});
  auto at = [](const Vector& v, Eigen::Index i) { return v.size() == 1 ? v(0) : v(i); };
  for (const Vector* v : {&c11, &c22, &c12}) {
    if (v->size() != 1 && v->size() != n) throw InvalidArgument("stiffness: c11, c22, c12 sizes disagree");
  }
  if (c66.size() == 0 || n == 0) throw InvalidArgument("stiffness: empty coefficient");
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = at(c11, i);
    const double b = at(c22, i);
    const double c = at(c12, i);
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !(a > 0.0) || !(a * b - c * c > 0.0)) {
      std::ostringstream os;
      os << "stiffness is not positive-definite at entry " << i;
      throw InvalidArgument(os.str());
    }
  }
  for (Eigen::Index i = 0; i < c66.size(); ++i) {
    if (!std::isfinite(c66(i)) || !(c66(i) > 0.0)) throw InvalidArgument("stiffness: c66 must be positive");
  }
}

// ----------------------------------------------------------- assembler ----

namespace {

struct FieldSpec {
  std::string name;
  std::vector<AxisKind> kinds;
  double scale;  // Gram multiplier
  Layout layout;
};

struct TermSpec {
  int from;  // index into X1 fields
  int to;    // index into X2 fields
  double coef;
  std::vector<Factor> factors;
};

enum class TraceMode { Velocity, Traction };

Factor adjoint_factor(Factor f) {
  switch (f) {
    case Factor::I:
      return Factor::I;
    case Factor::P:
      return Factor::Pt;
    case Factor::Pt:
      return Factor::P;
    case Factor::G:
      return Factor::D;
    case Factor::D:
      return Factor::G;
  }
  return Factor::I;
}

bool is_differential(Factor f) { return f == Factor::G || f == Factor::D; }

Matrix kron_all(const std::vector<Matrix>& ms) {
  Matrix out = ms.front();
  for (std::size_t i = 1; i < ms.size(); ++i) out = kron(out, ms[i]);
  return out;
}

Vector field_weights(const std::vector<StaggeredAxis>& axes, const FieldSpec& f) {
  std::vector<Matrix> ws;
  for (std::size_t a = 0; a < axes.size(); ++a) ws.emplace_back(axes[a].weights(f.kinds[a]));
  return f.scale * kron_all(ws).col(0);
}

Eigen::Index field_size(const std::vector<StaggeredAxis>& axes, const FieldSpec& f) {
  Eigen::Index n = 1;
  for (std::size_t a = 0; a < axes.size(); ++a) n *= axes[a].size(f.kinds[a]);
  return n;
}

std::vector<StaggeredAxis> make_axes(const GridSpec& grid) {
  grid.validate();
  std::vector<StaggeredAxis> axes;
  for (int a = 0; a < grid.dimension; ++a) axes.emplace_back(grid.cells_per_axis[a], grid.lengths_per_axis[a]);
  return axes;
}

std::vector<FieldBlock> lay_out(const std::vector<StaggeredAxis>& axes, const std::vector<FieldSpec>& fields) {
  std::vector<FieldBlock> blocks;
  Eigen::Index off = 0;
  for (const auto& f : fields) {
    const auto n = field_size(axes, f);
    blocks.push_back(FieldBlock{f.name, off, n, f.layout});
    off += n;
  }
  return blocks;
}

PortSystem assemble(const GridSpec& grid, const std::string& label, const std::vector<FieldSpec>& f1,
                    const std::vector<FieldSpec>& f2, const std::vector<TermSpec>& terms, TraceMode mode) {
  const auto axes = make_axes(grid);
  PortSystem sys;
  sys.label = label;
  sys.grid = grid;
  sys.x1_blocks = lay_out(axes, f1);
  sys.x2_blocks = lay_out(axes, f2);
  const auto n1 = sys.x1_blocks.back().offset + sys.x1_blocks.back().size;
  const auto n2 = sys.x2_blocks.back().offset + sys.x2_blocks.back().size;

  Vector m1(n1);
  Vector m2(n2);
  for (std::size_t i = 0; i < f1.size(); ++i) {
    m1.segment(sys.x1_blocks[i].offset, sys.x1_blocks[i].size) = field_weights(axes, f1[i]);
  }
  for (std::size_t i = 0; i < f2.size(); ++i) {
    m2.segment(sys.x2_blocks[i].offset, sys.x2_blocks[i].size) = field_weights(axes, f2[i]);
  }

  Matrix l = Matrix::Zero(n2, n1);
  Matrix k = Matrix::Zero(n1, n2);
  Matrix pb = Matrix::Zero(n1, n2);
  for (const auto& t : terms) {
    const FieldSpec& v = f1[t.from];
    const FieldSpec& w = f2[t.to];
    std::vector<Matrix> fwd;
    std::vector<Matrix> adj;
    std::vector<Matrix> bnd;
    int diff_axis = -1;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const Factor f = t.factors[a];
      if (StaggeredAxis::target(f, v.kinds[a]) != w.kinds[a]) {
        throw InvalidArgument("assembler: factor kinds do not match field layout for " + v.name + " -> " + w.name);
      }
      fwd.push_back(axes[a].op(f, v.kinds[a]));
      adj.push_back(axes[a].op(adjoint_factor(f), w.kinds[a]));
      if (is_differential(f)) {
        if (diff_axis >= 0) throw InvalidArgument("assembler: at most one differential factor per term");
        diff_axis = static_cast<int>(a);
        bnd.push_back(f == Factor::G ? axes[a].boundary() : Matrix(axes[a].boundary().transpose()));
      } else {
        bnd.push_back(axes[a].weights(v.kinds[a]).asDiagonal() * adj.back());
      }
    }
    const auto& bv = sys.x1_blocks[t.from];
    const auto& bw = sys.x2_blocks[t.to];
    l.block(bw.offset, bv.offset, bw.size, bv.size) += t.coef * kron_all(fwd);
    const double sign = diff_axis >= 0 ? -1.0 : 1.0;
    k.block(bv.offset, bw.offset, bv.size, bw.size) += sign * (w.scale / v.scale) * t.coef * kron_all(adj);
    if (diff_axis >= 0) {
      pb.block(bv.offset, bw.offset, bv.size, bw.size) += w.scale * t.coef * kron_all(bnd);
    }
  }

  // Factor the boundary form through the X1 boundary DOFs.
  std::vector<Eigen::Index> rows;
  std::vector<double> norms;
  for (Eigen::Index i = 0; i < n1; ++i) {
    const double s = pb.row(i).cwiseAbs().sum();
    if (s > 0.0) {
      rows.push_back(i);
      norms.push_back(s);
    }
  }
  const auto nb = static_cast<Eigen::Index>(rows.size());
  Matrix sel = Matrix::Zero(nb, n1);
  Vector nw(nb);
  for (Eigen::Index r = 0; r < nb; ++r) {
    sel(r, rows[r]) = 1.0;
    nw(r) = norms[r];
  }
  const Matrix other = nw.cwiseInverse().asDiagonal() * select_rows(pb, rows);

  sys.x1 = GramSpace::diagonal(m1);
  sys.x2 = GramSpace::diagonal(m2);
  sys.L = std::move(l);
  sys.K = std::move(k);
  if (mode == TraceMode::Velocity) {
    sys.u1 = GramSpace::diagonal(nw);
    sys.u2 = GramSpace::identity(0);
    sys.gamma1 = sel;
    sys.beta2 = other;
    sys.gamma2 = Matrix(0, n2);
    sys.beta1 = Matrix(0, n1);
  } else {
    sys.u1 = GramSpace::identity(0);
    sys.u2 = GramSpace::diagonal(nw);
    sys.beta1 = sel;
    sys.gamma2 = other;
    sys.gamma1 = Matrix(0, n1);
    sys.beta2 = Matrix(0, n2);
  }
  sys.validate_dimensions();
  return sys;
}

using AK = AxisKind;

struct Layouts {
  std::vector<FieldSpec> x1;
  std::vector<FieldSpec> x2;
};

Layouts wave_layout(int dim) {
  if (dim == 1) {
    return {{{"velocity", {AK::Node}, 1.0, Layout::PrimalNode}},
            {{"stress", {AK::Staggered}, 1.0, Layout::ExtendedStaggered}}};
  }
  return {{{"velocity", {AK::Node, AK::Node}, 1.0, Layout::PrimalNode}},
          {{"stress_x", {AK::Staggered, AK::Node}, 1.0, Layout::Edge},
           {"stress_y", {AK::Node, AK::Staggered}, 1.0, Layout::Edge}}};
}

Layouts elasticity_layout() {
  return {{{"vx", {AK::Node, AK::Staggered}, 1.0, Layout::Edge}, {"vy", {AK::Staggered, AK::Node}, 1.0, Layout::Edge}},
          {{"sxx", {AK::Staggered, AK::Staggered}, 1.0, Layout::CellCenter},
           {"syy", {AK::Staggered, AK::Staggered}, 1.0, Layout::CellCenter},
           {"sxy", {AK::Node, AK::Node}, 2.0, Layout::PrimalNode}}};
}

Layouts maxwell_layout() {
  return {{{"Ex", {AK::Cell, AK::Node, AK::Node}, 1.0, Layout::Edge},
           {"Ey", {AK::Node, AK::Cell, AK::Node}, 1.0, Layout::Edge},
           {"Ez", {AK::Node, AK::Node, AK::Cell}, 1.0, Layout::Edge}},
          {{"Hx", {AK::Node, AK::Staggered, AK::Staggered}, 1.0, Layout::Face},
           {"Hy", {AK::Staggered, AK::Node, AK::Staggered}, 1.0, Layout::Face},
           {"Hz", {AK::Staggered, AK::Staggered, AK::Node}, 1.0, Layout::Face},
           {"Jx", {AK::Cell, AK::Node, AK::Node}, 1.0, Layout::Edge},
           {"Jy", {AK::Node, AK::Cell, AK::Node}, 1.0, Layout::Edge},
           {"Jz", {AK::Node, AK::Node, AK::Cell}, 1.0, Layout::Edge}}};
}

Layouts beam_layout() {
  return {{{"velocity", {AK::Staggered}, 1.0, Layout::ExtendedStaggered}},
          {{"moment", {AK::Staggered}, 1.0, Layout::ExtendedStaggered}}};
}

void require_dimension(const GridSpec& grid, int dim, const char* what) {
  if (grid.dimension != dim) {
    std::ostringstream os;
    os << what << " needs a " << dim << "D grid, got " << grid.dimension << "D";
    throw InvalidArgument(os.str());
  }
}

}  // namespace

// ------------------------------------------------------------ builders ----

PortSystem build_wave(const GridSpec& grid, const CoefficientField& rho, const CoefficientField& tension) {
  if (grid.dimension != 1 && grid.dimension != 2) throw InvalidArgument("build_wave needs a 1D or 2D grid");
  const Layouts lay = wave_layout(grid.dimension);
  std::vector<TermSpec> terms;
  if (grid.dimension == 1) {
    terms.push_back({0, 0, 1.0, {Factor::G}});
  } else {
    terms.push_back({0, 0, 1.0, {Factor::G, Factor::I}});
    terms.push_back({0, 1, 1.0, {Factor::I, Factor::G}});
  }
  PortSystem sys = assemble(grid, grid.dimension == 1 ? "wave1d" : "wave2d", lay.x1, lay.x2, terms, TraceMode::Velocity);
  rho.expand(sys.x1.dim());
  tension.expand(sys.x2.dim());
  return sys;
}

PortSystem build_elasticity_2d(const GridSpec& grid, const CoefficientField& rho, const ElasticStiffness& stiffness) {
  require_dimension(grid, 2, "build_elasticity_2d");
  stiffness.validate();
  const Layouts lay = elasticity_layout();
  const std::vector<TermSpec> terms = {
      {0, 0, 1.0, {Factor::G, Factor::I}},
      {1, 1, 1.0, {Factor::I, Factor::G}},
      {0, 2, 0.5, {Factor::I, Factor::D}},
      {1, 2, 0.5, {Factor::D, Factor::I}},
  };
  PortSystem sys = assemble(grid, "elasticity2d", lay.x1, lay.x2, terms, TraceMode::Traction);
  rho.expand(sys.x1.dim());
  const auto ncell = sys.x2_blocks[0].size;
  const auto nnode = sys.x2_blocks[2].size;
  for (const Vector* v : {&stiffness.c11, &stiffness.c22, &stiffness.c12}) {
    if (v->size() != 1 && v->size() != ncell) throw InvalidArgument("stiffness: normal coefficients need 1 or one value per stress cell");
  }
  if (stiffness.c66.size() != 1 && stiffness.c66.size() != nnode) {
    throw InvalidArgument("stiffness: c66 needs 1 or one value per corner node");
  }
  return sys;
}

PortSystem build_beam_1d(const GridSpec& grid, const CoefficientField& mu, const CoefficientField& bending) {
  require_dimension(grid, 1, "build_beam_1d");
  grid.validate();
  if (grid.cells_per_axis[0] < 4) {
    throw InvalidArgument("grid too small: beam needs >= 4 cells to carry value and slope traces at both ends");
  }
  const StaggeredAxis ax(grid.cells_per_axis[0], grid.lengths_per_axis[0]);
  const Matrix g = ax.op(Factor::G, AxisKind::Node);
  const Matrix d = ax.op(Factor::D, AxisKind::Staggered);
  const Vector ms = ax.weights(AxisKind::Staggered);
  const auto n = ax.size(AxisKind::Staggered);
  const int last = ax.cells();

  PortSystem sys;
  sys.label = "beam1d";
  sys.grid = grid;
  const Layouts lay = beam_layout();
  sys.x1_blocks = {FieldBlock{lay.x1[0].name, 0, n, lay.x1[0].layout}};
  sys.x2_blocks = {FieldBlock{lay.x2[0].name, 0, n, lay.x2[0].layout}};
  sys.x1 = GramSpace::diagonal(ms);
  sys.x2 = GramSpace::diagonal(ms);
  sys.L = g * d;
  sys.K = g * d;
  // value and slope traces of the velocity, shear and moment reads of the moment field
  sys.gamma1 = Matrix::Zero(4, n);
  sys.gamma1(0, 0) = 1.0;
  sys.gamma1(1, n - 1) = 1.0;
  sys.gamma1.row(2) = -d.row(0);
  sys.gamma1.row(3) = d.row(last);
  sys.beta2 = Matrix::Zero(4, n);
  sys.beta2.row(0) = d.row(0);
  sys.beta2.row(1) = -d.row(last);
  sys.beta2(2, 0) = 1.0;
  sys.beta2(3, n - 1) = 1.0;
  sys.u1 = GramSpace::identity(4);
  sys.u2 = GramSpace::identity(0);
  sys.gamma2 = Matrix(0, n);
  sys.beta1 = Matrix(0, n);
  sys.validate_dimensions();
  mu.expand(n);
  bending.expand(n);
  return sys;
}

PortSystem build_maxwell_3d(const GridSpec& grid, const CoefficientField& eps, const CoefficientField& mu_mag,
                            const std::optional<CoefficientField>& eta_inv) {
  require_dimension(grid, 3, "build_maxwell_3d");
  const Layouts lay = maxwell_layout();
  using F = Factor;
  // L = [-curl; I] with E = (Ex, Ey, Ez) -> (Hx, Hy, Hz, Jx, Jy, Jz)
  const std::vector<TermSpec> terms = {
      {2, 0, -1.0, {F::I, F::G, F::P}}, {1, 0, 1.0, {F::I, F::P, F::G}},
      {0, 1, -1.0, {F::P, F::I, F::G}}, {2, 1, 1.0, {F::G, F::I, F::P}},
      {1, 2, -1.0, {F::G, F::P, F::I}}, {0, 2, 1.0, {F::P, F::G, F::I}},
      {0, 3, 1.0, {F::I, F::I, F::I}},  {1, 4, 1.0, {F::I, F::I, F::I}},
      {2, 5, 1.0, {F::I, F::I, F::I}},
  };
  PortSystem sys = assemble(grid, "maxwell3d", lay.x1, lay.x2, terms, TraceMode::Traction);
  const auto ne = sys.x1.dim();
  const auto nh = sys.x2_blocks[3].offset;
  eps.expand(ne);
  mu_mag.expand(nh);
  if (eta_inv) eta_inv->expand(ne);
  return sys;
}

Matrix block_coordinates(const PortSystem& sys, const std::string& block) {
  if (!sys.grid) throw InvalidArgument("block_coordinates: system has no grid");
  Layouts lay;
  if (sys.label == "wave1d" || sys.label == "wave2d") {
    lay = wave_layout(sys.grid->dimension);
  } else if (sys.label == "elasticity2d") {
    lay = elasticity_layout();
  } else if (sys.label == "beam1d") {
    lay = beam_layout();
  } else if (sys.label == "maxwell3d") {
    lay = maxwell_layout();
  } else {
    throw InvalidArgument("block_coordinates: unknown system label '" + sys.label + "'");
  }
  const FieldSpec* spec = nullptr;
  for (const auto* list : {&lay.x1, &lay.x2}) {
    for (const auto& f : *list) {
      if (f.name == block) spec = &f;
    }
  }
  if (spec == nullptr) throw InvalidArgument("block_coordinates: unknown block '" + block + "'");
  const auto axes = make_axes(*sys.grid);
  const auto d = static_cast<Eigen::Index>(axes.size());
  const auto total = field_size(axes, *spec);
  Matrix xyz(total, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    // DOF index is row-major over axes: axis 0 varies slowest.
    Eigen::Index inner = 1;
    for (Eigen::Index b = a + 1; b < d; ++b) inner *= axes[b].size(spec->kinds[b]);
    const Vector c = axes[a].coordinates(spec->kinds[a]);
    for (Eigen::Index i = 0; i < total; ++i) xyz(i, a) = c((i / inner) % c.size());
  }
  return xyz;
}

}  // namespace phs
