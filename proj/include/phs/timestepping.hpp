#pragma once

// Implicit-midpoint integration of the closed port dynamics
//   alpha' = F alpha + B_in u,   y = C_out alpha + D_out u,
// obtained from the extended operator after eliminating e_r = S f_r.

#include "phs/bcs.hpp"
#include "phs/physics.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace phs {

using InputSignal = std::function<Vector(double)>;

/// u(t) = 0 on a port space of dimension m.
InputSignal zero_input(Eigen::Index m);

struct PortDynamics {
  Matrix F;      // storage x storage
  Matrix Bin;    // storage x input
  Matrix Cout;   // input x storage
  Matrix Dout;   // input x input
  Matrix Fr_x;   // resistive flow from state
  Matrix Fr_u;   // resistive flow from input
  Matrix W;      // energy form M_s Q
  Matrix G;      // boundary effort trace on the full state
  Eigen::Index state_dim() const { return F.rows(); }
  Eigen::Index input_dim() const { return Bin.cols(); }
};

PortDynamics make_dynamics(const ExtendedOperator& op, const ConstitutiveLaw& law, const PortSystem& sys);

struct StepResult {
  Vector x_next;
  Vector u_mid;
  Vector y_mid;
  Vector f_r_mid;
};

/// Factors (I - dt/2 F) once and reuses it for every step. A negative dt steps backward.
class MidpointStepper {
 public:
  MidpointStepper(PortDynamics dyn, double dt);

  StepResult step(const Vector& x, double t, const InputSignal& u) const;
  const PortDynamics& dynamics() const { return dyn_; }
  double dt() const { return dt_; }
  /// 2-norm condition number of I - dt/2 F.
  double condition() const;

 private:
  PortDynamics dyn_;
  double dt_;
  Matrix lhs_;
  Matrix rhs_;
  Eigen::PartialPivLU<Matrix> lu_;
};

StepResult midpoint_step(const Vector& x, double t, double dt, const ExtendedOperator& op, const ConstitutiveLaw& law,
                         const PortSystem& sys, const InputSignal& u);

struct Trajectory {
  std::vector<double> times;
  std::vector<double> state_times;      // times of the recorded states
  std::vector<Vector> states;           // empty unless recorded
  std::vector<Vector> inputs;           // midpoint inputs, one per step
  std::vector<Vector> outputs;          // midpoint outputs, one per step
  std::vector<Vector> endpoint_outputs; // C_out x_n + D_out u(t_n), one per time
  std::vector<double> energies;         // one per time
  std::vector<double> boundary_power;   // <y_mid, u_mid>_N, one per step
  std::vector<double> dissipation;      // f_r^T M_r S f_r at midpoint, one per step
  std::vector<double> balance_residuals;
  std::vector<std::string> warnings;
  Vector final_state;
};

struct SimulationOptions {
  double balance_tol = 1e-10;  // relative to 1 + |H|
  double compatibility_tol = 1e-8;
  bool record_states = false;
  int snapshot_every = 0;      // record every k-th state when > 0
};

/// Throws NumericalError on NaN, or on an audit failure naming the step index.
Trajectory simulate(const PortSystem& sys, const ConstitutiveLaw& law, const InputSignal& u, const Vector& x0,
                    double dt, int n_steps, const SimulationOptions& opts = {});

/// Real standing mode of the lossless part of the dynamics, index 0 = lowest nonzero frequency.
Vector discrete_mode(const PortDynamics& dyn, int index, double* omega = nullptr);

struct ConvergenceResult {
  std::string case_id;
  std::vector<int> cells;
  std::vector<double> errors;
  std::vector<double> orders;  // log2(err_h / err_{h/2}) for consecutive pairs
  bool monotone = true;
};

/// Cases: "wave1d" (standing mode cos(pi x) cos(pi t) with matching boundary velocity) and
/// "wave1d-zero" (zero data, zero input).
ConvergenceResult convergence_order(const std::string& case_id, const std::vector<int>& refinements);

/// CSV with header time,H,boundary_power,balance_residual; step quantities are blank on row 0.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Binary states: magic "PHSSNAP1", u64 count, u64 dim, then per state f64 time and dim f64 values, little-endian.
void write_state_snapshots(std::ostream& out, const std::vector<double>& times, const std::vector<Vector>& states);
void read_state_snapshots(std::istream& in, std::vector<double>& times, std::vector<Vector>& states);

}  // namespace phs
