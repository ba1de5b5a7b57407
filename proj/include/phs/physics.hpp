#pragma once

// Constitutive closures, Hamiltonian, resistive ports and power-balance audits.

#include "phs/discretization.hpp"
#include "phs/port_system.hpp"

#include <string>
#include <vector>

namespace phs {

/// Partition of the stacked state X = X1 x X2 into energy-storing and resistive DOFs.
struct PortSplit {
  std::vector<Eigen::Index> storage;
  std::vector<Eigen::Index> resistive;

  static PortSplit all_storage(Eigen::Index n);
  /// Throws InvalidArgument unless the two sets are disjoint and cover 0..n-1.
  void validate(Eigen::Index n) const;
};

struct ConstitutiveLaw {
  std::string kind;
  Matrix Q;               // co-energy map on storage DOFs, e_s = Q alpha
  Matrix S;               // resistive map on resistive DOFs, e_r = S f_r
  Matrix storage_gram;    // state Gram restricted to storage DOFs
  Matrix resistive_gram;  // state Gram restricted to resistive DOFs
  PortSplit split;

  Eigen::Index storage_dim() const { return Q.rows(); }
  Eigen::Index resistive_dim() const { return S.rows(); }
  bool has_resistive_port() const { return S.rows() > 0; }
  /// storage_gram * Q.
  Matrix energy_form() const;
  /// Throws StructuralError unless M Q is symmetric and positive-definite.
  void validate() const;
};

/// Q per physics kind: wave {rho, T}; elasticity {rho, c11, c22, c12, c66};
/// beam {mu, bending}; maxwell {eps, mu_mag} or {eps, mu_mag, eta_inv}.
ConstitutiveLaw build_constitutive(const std::string& kind, const PortSystem& sys,
                                   const std::vector<CoefficientField>& fields);

/// Elasticity with a general orthotropic stiffness (c12 may be zero or negative).
ConstitutiveLaw build_constitutive(const PortSystem& sys, const CoefficientField& rho,
                                   const ElasticStiffness& stiffness);

/// H = 1/2 alpha^T M Q alpha over storage DOFs.
double hamiltonian(const ConstitutiveLaw& law, const Vector& alpha, const PortSystem& sys);

/// c1 ||a||_M^2 <= H(a) <= c2 ||a||_M^2.
struct EnergyBounds {
  double c1 = 0.0;
  double c2 = 0.0;
};
EnergyBounds energy_bounds(const ConstitutiveLaw& law);

/// One midpoint step as seen by the audit.
struct StepRecord {
  Vector alpha_n;
  Vector alpha_next;
  Vector u_mid;
  Vector y_mid;
  Vector f_r_mid;  // empty when there is no resistive port
  double dt = 0.0;
};

/// Supplied boundary power <y, u>_N.
double boundary_power(const Vector& y, const Vector& u, const PortSystem& sys);

/// Dissipated power f_r^T M_r S f_r.
double dissipated_power(const ConstitutiveLaw& law, const Vector& f_r);

/// |H(a_{n+1}) - H(a_n) - dt (<y_mid, u_mid>_N - f_r^T M_r S f_r)|.
double power_balance_residual(const StepRecord& step, const ConstitutiveLaw& law, const PortSystem& sys);

/// Same audit with precomputed energy form W = M Q, input Gram N and dissipation form M_r S.
double power_balance_residual(const StepRecord& step, const Matrix& energy_form, const Matrix& input_gram,
                              const Matrix& dissipation_form);

struct DissipationReport {
  bool lossy = false;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double symmetry_residual = 0.0;
};

/// Throws StructuralError when M_r S is not symmetric or is indefinite.
DissipationReport dissipation_check(const ConstitutiveLaw& law);

}  // namespace phs
