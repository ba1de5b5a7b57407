#include "phs/timestepping.hpp"

#include "phs/errors.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace phs {

namespace {

Matrix pick(const Matrix& m, const std::vector<Eigen::Index>& rows, const std::vector<Eigen::Index>& cols) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  }
  return out;
}

Matrix pick_rows(const Matrix& m, const std::vector<Eigen::Index>& rows) { return select_rows(m, rows); }

Matrix pick_cols(const Matrix& m, const std::vector<Eigen::Index>& cols) {
  return select_rows(m.transpose(), cols).transpose();
}

bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace

InputSignal zero_input(Eigen::Index m) {
  return [m](double) { return Vector(Vector::Zero(m)); };
}

PortDynamics make_dynamics(const ExtendedOperator& op, const ConstitutiveLaw& law, const PortSystem& sys) {
  const auto& s = law.split.storage;
  const auto& r = law.split.resistive;
  const auto nr = static_cast<Eigen::Index>(r.size());
  if (op.state_dim() != sys.state_dim()) throw DimensionMismatch("make_dynamics: operator and system differ");
  const Matrix a_ss = pick(op.A, s, s);
  const Matrix a_sr = pick(op.A, s, r);
  const Matrix a_rs = pick(op.A, r, s);
  const Matrix a_rr = pick(op.A, r, r);
  const Matrix b_s = pick_rows(op.B, s);
  const Matrix b_r = pick_rows(op.B, r);
  const Matrix c_s = pick_cols(op.C, s);
  const Matrix c_r = pick_cols(op.C, r);

  PortDynamics dyn;
  dyn.W = law.energy_form();
  dyn.G = sys.boundary_map();
  if (nr == 0) {
    dyn.F = a_ss * law.Q;
    dyn.Bin = b_s;
    dyn.Cout = c_s * law.Q;
    dyn.Dout = Matrix::Zero(op.input_dim(), op.input_dim());
    dyn.Fr_x = Matrix(0, law.storage_dim());
    dyn.Fr_u = Matrix(0, op.input_dim());
    return dyn;
  }
  // (I - A_rr S) f_r = A_rs Q x + B_r u
  const Eigen::PartialPivLU<Matrix> rf(Matrix::Identity(nr, nr) - a_rr * law.S);
  dyn.Fr_x = rf.solve(a_rs * law.Q);
  dyn.Fr_u = rf.solve(b_r);
  dyn.F = a_ss * law.Q + a_sr * law.S * dyn.Fr_x;
  dyn.Bin = b_s + a_sr * law.S * dyn.Fr_u;
  dyn.Cout = c_s * law.Q + c_r * law.S * dyn.Fr_x;
  dyn.Dout = c_r * law.S * dyn.Fr_u;
  return dyn;
}

MidpointStepper::MidpointStepper(PortDynamics dyn, double dt) : dyn_(std::move(dyn)), dt_(dt) {
  if (!std::isfinite(dt)) throw InvalidArgument("time step must be finite");
  const auto n = dyn_.state_dim();
  const Matrix id = Matrix::Identity(n, n);
  lhs_ = id - 0.5 * dt_ * dyn_.F;
  rhs_ = id + 0.5 * dt_ * dyn_.F;
  lu_.compute(lhs_);
}

double MidpointStepper::condition() const { return condition_number(lhs_); }

StepResult MidpointStepper::step(const Vector& x, double t, const InputSignal& u) const {
  if (x.size() != dyn_.state_dim()) throw DimensionMismatch("midpoint step: state size");
  if (!all_finite(x)) throw NumericalError("midpoint step: non-finite state");
  StepResult out;
  out.u_mid = u(t + 0.5 * dt_);
  if (out.u_mid.size() != dyn_.input_dim()) throw DimensionMismatch("midpoint step: input size");
  if (!all_finite(out.u_mid)) throw NumericalError("midpoint step: non-finite input");
  Vector rhs = rhs_ * x;
  if (dyn_.input_dim() > 0) rhs += dt_ * (dyn_.Bin * out.u_mid);
  out.x_next = lu_.solve(rhs);
  if (!all_finite(out.x_next)) throw NumericalError("midpoint step: singular or non-finite solve");
  const Vector mid = 0.5 * (x + out.x_next);
  out.y_mid = dyn_.Cout * mid + dyn_.Dout * out.u_mid;
  out.f_r_mid = dyn_.Fr_x * mid + dyn_.Fr_u * out.u_mid;
  return out;
}

StepResult midpoint_step(const Vector& x, double t, double dt, const ExtendedOperator& op, const ConstitutiveLaw& law,
                         const PortSystem& sys, const InputSignal& u) {
  return MidpointStepper(make_dynamics(op, law, sys), dt).step(x, t, u);
}

Trajectory simulate(const PortSystem& sys, const ConstitutiveLaw& law, const InputSignal& u, const Vector& x0,
                    double dt, int n_steps, const SimulationOptions& opts) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
  if (n_steps < 0) throw InvalidArgument("steps must be nonnegative");
  const ExtendedOperator op = assemble_extended(sys);
  const MidpointStepper stepper(make_dynamics(op, law, sys), dt);
  const PortDynamics& dyn = stepper.dynamics();
  if (x0.size() != dyn.state_dim()) {
    std::ostringstream os;
    os << "simulate: initial state has " << x0.size() << " entries, expected " << dyn.state_dim();
    throw DimensionMismatch(os.str());
  }

  Trajectory traj;
  // Compatibility of the boundary effort trace with the initial input.
  {
    Vector e = Vector::Zero(sys.state_dim());
    const Vector es = law.Q * x0;
    for (std::size_t i = 0; i < law.split.storage.size(); ++i) e(law.split.storage[i]) = es(static_cast<Eigen::Index>(i));
    if (law.has_resistive_port()) {
      const Vector er = law.S * (dyn.Fr_x * x0 + dyn.Fr_u * u(0.0));
      for (std::size_t i = 0; i < law.split.resistive.size(); ++i) e(law.split.resistive[i]) = er(static_cast<Eigen::Index>(i));
    }
    const Vector u0 = u(0.0);
    if (u0.size() == dyn.G.rows() && u0.size() > 0) {
      const double mismatch = (u0 - dyn.G * e).norm();
      if (mismatch > opts.compatibility_tol * (1.0 + u0.norm())) {
        std::ostringstream os;
        os << "initial state is not compatible with u(0): |u(0) - G e0| = " << mismatch;
        traj.warnings.push_back(os.str());
      }
    }
  }

  auto record = [&](int k, double t, const Vector& x) {
    const bool keep = opts.record_states || (opts.snapshot_every > 0 && (k % opts.snapshot_every == 0 || k == n_steps));
    if (keep) {
      traj.state_times.push_back(t);
      traj.states.push_back(x);
    }
  };

  const Matrix n_gram = sys.input_gram();
  const Matrix diss_form = law.resistive_gram * law.S;
  auto energy = [&](const Vector& a) { return 0.5 * a.dot(dyn.W * a); };
  auto power = [&](const Vector& y, const Vector& uu) { return y.size() > 0 ? y.dot(n_gram * uu) : 0.0; };
  auto loss = [&](const Vector& f) { return f.size() > 0 ? f.dot(diss_form * f) : 0.0; };

  Vector x = x0;
  const double h = energy(x);
  traj.times.push_back(0.0);
  traj.energies.push_back(h);
  traj.endpoint_outputs.push_back(dyn.Cout * x + dyn.Dout * u(0.0));
  record(0, 0.0, x);
  for (int k = 0; k < n_steps; ++k) {
    const double t = k * dt;
    StepResult st = stepper.step(x, t, u);
    StepRecord rec{x, st.x_next, st.u_mid, st.y_mid, st.f_r_mid, dt};
    const double res = power_balance_residual(rec, dyn.W, n_gram, diss_form);
    const double h_next = energy(st.x_next);
    if (!std::isfinite(res) || !std::isfinite(h_next)) {
      std::ostringstream os;
      os << "simulate: non-finite value at step " << k;
      throw NumericalError(os.str());
    }
    if (res > opts.balance_tol * (1.0 + std::abs(h_next))) {
      std::ostringstream os;
      os << "simulate: power balance audit failed at step " << k << " (residual " << res << ")";
      throw NumericalError(os.str());
    }
    const double t_next = (k + 1) * dt;
    traj.times.push_back(t_next);
    traj.energies.push_back(h_next);
    traj.inputs.push_back(st.u_mid);
    traj.outputs.push_back(st.y_mid);
    traj.boundary_power.push_back(power(st.y_mid, st.u_mid));
    traj.dissipation.push_back(loss(st.f_r_mid));
    traj.balance_residuals.push_back(res);
    traj.endpoint_outputs.push_back(dyn.Cout * st.x_next + dyn.Dout * u(t_next));
    x = std::move(st.x_next);
    record(k + 1, t_next, x);
  }
  traj.final_state = x;
  return traj;
}

Vector discrete_mode(const PortDynamics& dyn, int index, double* omega) {
  const auto n = dyn.state_dim();
  if (index < 0) throw InvalidArgument("mode index must be nonnegative");
  const Matrix w = 0.5 * (dyn.W + dyn.W.transpose());
  const Eigen::LLT<Matrix> llt(w);
  const Matrix r = llt.matrixU();  // W = R^T R
  // In y = R x the lossless generator R F R^-1 is skew; its square is symmetric.
  const Matrix rf = r * dyn.F;
  const Matrix k = r.transpose().triangularView<Eigen::Lower>().solve(rf.transpose()).transpose();
  const Matrix skew = 0.5 * (k - k.transpose());
  const Matrix sq = -(skew * skew);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (sq + sq.transpose()));
  const Vector& ev = es.eigenvalues();
  const double top = n > 0 ? ev.cwiseAbs().maxCoeff() : 0.0;
  int seen = -1;
  double last = -1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (ev(i) <= 1e-10 * top) continue;
    if (last >= 0.0 && std::abs(ev(i) - last) <= 1e-8 * std::max(1.0, ev(i))) continue;
    last = ev(i);
    if (++seen == index) {
      if (omega != nullptr) *omega = std::sqrt(ev(i));
      Vector y = es.eigenvectors().col(i);
      return r.triangularView<Eigen::Upper>().solve(y);
    }
  }
  std::ostringstream os;
  os << "mode index " << index << " exceeds the number of distinct nonzero frequencies (" << seen + 1 << ")";
  throw InvalidArgument(os.str());
}

ConvergenceResult convergence_order(const std::string& case_id, const std::vector<int>& refinements) {
  if (case_id != "wave1d" && case_id != "wave1d-zero") {
    throw InvalidArgument("convergence: unknown case '" + case_id + "' (expected wave1d, wave1d-zero)");
  }
  if (refinements.size() < 2) throw InvalidArgument("convergence: need at least two refinements");
  const bool zero = case_id == "wave1d-zero";
  constexpr double pi = std::numbers::pi;
  constexpr double t_final = 0.75;
  ConvergenceResult res;
  res.case_id = case_id;
  for (int n : refinements) {
    const PortSystem sys = build_wave(GridSpec::line(n), CoefficientField("rho", 1.0), CoefficientField("T", 1.0));
    const ConstitutiveLaw law =
        build_constitutive("wave", sys, {CoefficientField("rho", 1.0), CoefficientField("T", 1.0)});
    const Vector xv = block_coordinates(sys, "velocity").col(0);
    const Vector xs = block_coordinates(sys, "stress").col(0);
    const auto n1 = xv.size();
    const auto n2 = xs.size();
    // w = cos(pi x) cos(pi t): velocity w_t, strain w_x
    auto exact = [&](double t) {
      Vector a(n1 + n2);
      for (Eigen::Index i = 0; i < n1; ++i) a(i) = zero ? 0.0 : -pi * std::cos(pi * xv(i)) * std::sin(pi * t);
      for (Eigen::Index i = 0; i < n2; ++i) a(n1 + i) = zero ? 0.0 : -pi * std::sin(pi * xs(i)) * std::cos(pi * t);
      return a;
    };
    const InputSignal u = [&](double t) {
      Vector v(2);
      v << (zero ? 0.0 : -pi * std::sin(pi * t)), (zero ? 0.0 : pi * std::sin(pi * t));
      return v;
    };
    const double h = 1.0 / n;
    const double dt = 0.5 * h;
    const int steps = static_cast<int>(std::lround(t_final / dt));
    const Trajectory traj = simulate(sys, law, u, exact(0.0), dt, steps);
    const Vector err = traj.final_state - exact(steps * dt);
    res.cells.push_back(n);
    res.errors.push_back(std::sqrt(err.dot(sys.state_gram() * err)));
  }
  for (std::size_t i = 1; i < res.errors.size(); ++i) {
    const double a = res.errors[i - 1];
    const double b = res.errors[i];
    if (b > a) res.monotone = false;
    res.orders.push_back(a == 0.0 && b == 0.0 ? 0.0 : std::log2(a / b) / std::log2(double(res.cells[i]) / res.cells[i - 1]));
  }
  return res;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const auto flags = out.flags();
  const auto prec = out.precision();
  out.precision(17);
  out << "time,H,boundary_power,balance_residual\r\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    // adding +0.0 folds a negative zero into +0
    out << traj.times[k] + 0.0 << ',' << traj.energies[k] + 0.0 << ',';
    if (k > 0) out << traj.boundary_power[k - 1] + 0.0 << ',' << traj.balance_residuals[k - 1] + 0.0;
    else out << ',';
    out << "\r\n";
  }
  out.flags(flags);
  out.precision(prec);
}

namespace {

constexpr char kSnapMagic[8] = {'P', 'H', 'S', 'S', 'N', 'A', 'P', '1'};

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits = std::bit_cast<std::uint64_t>(value);
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xffU);
  out.write(reinterpret_cast<const char*>(buf), 8);
}

template <typename T>
T get_le(std::istream& in) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), 8)) throw InvalidArgument("state snapshot: truncated file");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_state_snapshots(std::ostream& out, const std::vector<double>& times, const std::vector<Vector>& states) {
  if (times.size() != states.size()) throw DimensionMismatch("state snapshot: times and states differ in count");
  const std::uint64_t dim = states.empty() ? 0 : static_cast<std::uint64_t>(states.front().size());
  out.write(kSnapMagic, sizeof(kSnapMagic));
  put_le<std::uint64_t>(out, states.size());
  put_le<std::uint64_t>(out, dim);
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (static_cast<std::uint64_t>(states[k].size()) != dim) throw DimensionMismatch("state snapshot: ragged states");
    put_le<double>(out, times[k]);
    for (Eigen::Index i = 0; i < states[k].size(); ++i) put_le<double>(out, states[k](i));
  }
}

void read_state_snapshots(std::istream& in, std::vector<double>& times, std::vector<Vector>& states) {
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kSnapMagic, 8) != 0) throw InvalidArgument("state snapshot: bad magic");
  const auto count = get_le<std::uint64_t>(in);
  const auto dim = get_le<std::uint64_t>(in);
  times.clear();
  states.clear();
  for (std::uint64_t k = 0; k < count; ++k) {
    times.push_back(get_le<double>(in));
    Vector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = get_le<double>(in);
    states.push_back(std::move(v));
  }
}

}  // namespace phs
