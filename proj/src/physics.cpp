#include "phs/physics.hpp"

#include "phs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace phs {

namespace {

Matrix sub_matrix(const Matrix& m, const std::vector<Eigen::Index>& idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  Matrix out(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) out(i, j) = m(idx[i], idx[j]);
  }
  return out;
}

void require_fields(const std::string& kind, const std::vector<CoefficientField>& fields, std::size_t lo,
                    std::size_t hi) {
  if (fields.size() < lo || fields.size() > hi) {
    std::ostringstream os;
    os << "build_constitutive(" << kind << "): expected ";
    if (lo == hi) {
      os << lo;
    } else {
      os << lo << " or " << hi;
    }
    os << " coefficient fields, got " << fields.size();
    throw InvalidArgument(os.str());
  }
}

void require_label(const PortSystem& sys, std::initializer_list<const char*> labels, const std::string& kind) {
  for (const char* l : labels) {
    if (sys.label == l) return;
  }
  throw InvalidArgument("build_constitutive: kind '" + kind + "' does not match system '" + sys.label + "'");
}

ConstitutiveLaw finish(std::string kind, const PortSystem& sys, Matrix q_full, PortSplit split, Matrix s) {
  const auto n = sys.state_dim();
  split.validate(n);
  const Matrix m = sys.state_gram();
  ConstitutiveLaw law;
  law.kind = std::move(kind);
  law.Q = sub_matrix(q_full, split.storage);
  law.storage_gram = sub_matrix(m, split.storage);
  law.resistive_gram = sub_matrix(m, split.resistive);
  law.S = std::move(s);
  law.split = std::move(split);
  law.validate();
  return law;
}

Matrix two_block_q(const PortSystem& sys, const Vector& q1, const Vector& q2) {
  Vector q(sys.state_dim());
  q << q1, q2;
  return q.asDiagonal();
}

}  // namespace

PortSplit PortSplit::all_storage(Eigen::Index n) {
  PortSplit s;
  for (Eigen::Index i = 0; i < n; ++i) s.storage.push_back(i);
  return s;
}

void PortSplit::validate(Eigen::Index n) const {
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (const auto* set : {&storage, &resistive}) {
    for (auto i : *set) {
      if (i < 0 || i >= n) throw InvalidArgument("PortSplit: index out of range");
      ++seen[static_cast<std::size_t>(i)];
    }
  }
  if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) {
    throw InvalidArgument("PortSplit: storage and resistive sets must partition the state");
  }
}

Matrix ConstitutiveLaw::energy_form() const { return storage_gram * Q; }

void ConstitutiveLaw::validate() const {
  if (Q.rows() != Q.cols() || storage_gram.rows() != Q.rows()) throw DimensionMismatch("ConstitutiveLaw: Q shape");
  if (S.rows() != S.cols() || resistive_gram.rows() != S.rows()) throw DimensionMismatch("ConstitutiveLaw: S shape");
  const Matrix w = energy_form();
  const double asym = max_abs(w - w.transpose());
  if (asym > 1e-13 * std::max(1.0, max_abs(w))) {
    std::ostringstream os;
    os << "constitutive map is not self-adjoint in the state gram (residual " << asym << ")";
    throw StructuralError(os.str());
  }
  if (w.rows() > 0) {
    Eigen::LLT<Matrix> llt(0.5 * (w + w.transpose()));
    if (llt.info() != Eigen::Success) throw StructuralError("constitutive map is not positive-definite");
  }
}

ConstitutiveLaw build_constitutive(const std::string& kind, const PortSystem& sys,
                                   const std::vector<CoefficientField>& fields) {
  sys.validate_dimensions();
  const auto n1 = sys.x1.dim();
  const auto n2 = sys.x2.dim();
  if (kind == "wave") {
    require_label(sys, {"wave1d", "wave2d"}, kind);
    require_fields(kind, fields, 2, 2);
    return finish(kind, sys, two_block_q(sys, fields[0].expand(n1).cwiseInverse(), fields[1].expand(n2)),
                  PortSplit::all_storage(sys.state_dim()), Matrix(0, 0));
  }
  if (kind == "beam") {
    require_label(sys, {"beam1d"}, kind);
    require_fields(kind, fields, 2, 2);
    return finish(kind, sys, two_block_q(sys, fields[0].expand(n1).cwiseInverse(), fields[1].expand(n2)),
                  PortSplit::all_storage(sys.state_dim()), Matrix(0, 0));
  }
  if (kind == "elasticity") {
    require_fields(kind, fields, 5, 5);
    ElasticStiffness st{fields[1].values, fields[2].values, fields[3].values, fields[4].values};
    return build_constitutive(sys, fields[0], st);
  }
  if (kind == "maxwell") {
    require_label(sys, {"maxwell3d"}, kind);
    require_fields(kind, fields, 2, 3);
    const auto jb = sys.find_block("Jx");
    if (!jb) throw InvalidArgument("build_constitutive(maxwell): system has no current block");
    const auto nh = sys.x2_blocks[3].offset;
    const auto nj = n2 - nh;
    Vector q = Vector::Ones(sys.state_dim());
    q.head(n1) = fields[0].expand(n1).cwiseInverse();
    q.segment(n1, nh) = fields[1].expand(nh).cwiseInverse();
    PortSplit split;
    for (Eigen::Index i = 0; i < n1 + nh; ++i) split.storage.push_back(i);
    for (Eigen::Index i = n1 + nh; i < sys.state_dim(); ++i) split.resistive.push_back(i);
    Vector s = Vector::Zero(nj);
    if (fields.size() == 3) s = fields[2].expand(nj);
    return finish(kind, sys, Matrix(q.asDiagonal()), split, Matrix(s.asDiagonal()));
  }
  throw InvalidArgument("build_constitutive: unknown kind '" + kind + "' (expected wave, elasticity, beam, maxwell)");
}

ConstitutiveLaw build_constitutive(const PortSystem& sys, const CoefficientField& rho,
                                   const ElasticStiffness& stiffness) {
  require_label(sys, {"elasticity2d"}, "elasticity");
  stiffness.validate();
  const auto n1 = sys.x1.dim();
  const auto ncell = sys.x2_blocks.at(0).size;
  const auto nnode = sys.x2_blocks.at(2).size;
  auto expand = [](const Vector& v, Eigen::Index n, const char* what) {
    if (v.size() == 1) return Vector(Vector::Constant(n, v(0)));
    if (v.size() != n) throw InvalidArgument(std::string("stiffness: wrong number of values for ") + what);
    return v;
  };
  const Vector c11 = expand(stiffness.c11, ncell, "c11");
  const Vector c22 = expand(stiffness.c22, ncell, "c22");
  const Vector c12 = expand(stiffness.c12, ncell, "c12");
  const Vector c66 = expand(stiffness.c66, nnode, "c66");
  Matrix q = Matrix::Zero(sys.state_dim(), sys.state_dim());
  q.topLeftCorner(n1, n1) = rho.expand(n1).cwiseInverse().asDiagonal();
  const auto oxx = n1 + sys.x2_blocks[0].offset;
  const auto oyy = n1 + sys.x2_blocks[1].offset;
  const auto oxy = n1 + sys.x2_blocks[2].offset;
  for (Eigen::Index i = 0; i < ncell; ++i) {
    q(oxx + i, oxx + i) = c11(i);
    q(oyy + i, oyy + i) = c22(i);
    q(oxx + i, oyy + i) = c12(i);
    q(oyy + i, oxx + i) = c12(i);
  }
  // shear Gram carries a factor 2, so the engineering shear modulus doubles here
  for (Eigen::Index i = 0; i < nnode; ++i) q(oxy + i, oxy + i) = 2.0 * c66(i);
  return finish("elasticity", sys, q, PortSplit::all_storage(sys.state_dim()), Matrix(0, 0));
}

double hamiltonian(const ConstitutiveLaw& law, const Vector& alpha, const PortSystem& /*sys*/) {
  if (alpha.size() != law.storage_dim()) {
    std::ostringstream os;
    os << "hamiltonian: state has " << alpha.size() << " entries, expected " << law.storage_dim();
    throw DimensionMismatch(os.str());
  }
  return 0.5 * alpha.dot(law.energy_form() * alpha);
}

EnergyBounds energy_bounds(const ConstitutiveLaw& law) {
  if (law.storage_dim() == 0) return {};
  const Matrix w = law.energy_form();
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(0.5 * (w + w.transpose()), law.storage_gram);
  const auto& ev = es.eigenvalues();
  return {0.5 * ev.minCoeff(), 0.5 * ev.maxCoeff()};
}

double boundary_power(const Vector& y, const Vector& u, const PortSystem& sys) {
  if (y.size() != sys.input_dim() || u.size() != sys.input_dim()) {
    throw DimensionMismatch("boundary_power: port vectors do not match the boundary space");
  }
  if (y.size() == 0) return 0.0;
  return y.dot(sys.input_gram() * u);
}

double dissipated_power(const ConstitutiveLaw& law, const Vector& f_r) {
  if (!law.has_resistive_port()) return 0.0;
  if (f_r.size() != law.resistive_dim()) throw DimensionMismatch("dissipated_power: resistive flow size");
  return f_r.dot(law.resistive_gram * (law.S * f_r));
}

double power_balance_residual(const StepRecord& step, const ConstitutiveLaw& law, const PortSystem& sys) {
  return power_balance_residual(step, law.energy_form(), sys.input_gram(), law.resistive_gram * law.S);
}

double power_balance_residual(const StepRecord& step, const Matrix& energy_form, const Matrix& input_gram,
                              const Matrix& dissipation_form) {
  const Matrix& w = energy_form;
  if (step.alpha_n.size() != w.rows() || step.alpha_next.size() != w.rows()) {
    throw DimensionMismatch("power_balance_residual: state size");
  }
  if (step.u_mid.size() != input_gram.rows() || step.y_mid.size() != input_gram.rows()) {
    throw DimensionMismatch("power_balance_residual: port vectors do not match the boundary space");
  }
  // H(b) - H(a) = (a + b)/2 . W (b - a) for symmetric W
  const Vector mid = 0.5 * (step.alpha_n + step.alpha_next);
  const double dh = mid.dot(w * (step.alpha_next - step.alpha_n));
  const double supplied = step.y_mid.size() > 0 ? step.y_mid.dot(input_gram * step.u_mid) : 0.0;
  double lost = 0.0;
  if (dissipation_form.rows() > 0) {
    if (step.f_r_mid.size() != dissipation_form.rows()) throw DimensionMismatch("power_balance_residual: resistive flow size");
    lost = step.f_r_mid.dot(dissipation_form * step.f_r_mid);
  }
  return std::abs(dh - step.dt * (supplied - lost));
}

DissipationReport dissipation_check(const ConstitutiveLaw& law) {
  DissipationReport rep;
  if (!law.has_resistive_port()) return rep;
  const Matrix ms = law.resistive_gram * law.S;
  rep.symmetry_residual = max_abs(ms - ms.transpose());
  if (rep.symmetry_residual > 1e-13 * std::max(1.0, max_abs(ms))) {
    throw StructuralError("resistive map is not symmetric in the resistive gram");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(0.5 * (ms + ms.transpose()), law.resistive_gram,
                                                      Eigen::EigenvaluesOnly);
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  rep.max_eigenvalue = es.eigenvalues().maxCoeff();
  const double tol = 1e-13 * std::max(1.0, std::abs(rep.max_eigenvalue));
  if (rep.min_eigenvalue < -tol) {
    std::ostringstream os;
    os << "resistive map is indefinite (min eigenvalue " << rep.min_eigenvalue << ")";
    throw StructuralError(os.str());
  }
  rep.lossy = rep.max_eigenvalue > tol;
  return rep;
}

}  // namespace phs
