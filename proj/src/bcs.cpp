#include "phs/bcs.hpp"

#include "phs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace phs {

namespace {

constexpr double kRankTol = 1e-10;
constexpr double kInvertibleCond = 1e12;

// M-orthonormal basis of ker(gamma): Euclidean null space re-orthonormalized in M.
Matrix gram_kernel(const Matrix& gamma, const Matrix& gram) {
  const Matrix n = null_space(gamma, kRankTol);
  if (n.cols() == 0) return n;
  const Matrix g = n.transpose() * gram * n;
  Eigen::LLT<Matrix> llt(g);
  const Matrix r = llt.matrixU();
  return r.transpose().triangularView<Eigen::Lower>().solve(n.transpose()).transpose();
}

KernelRestriction restrict_unchecked(const PortSystem& sys) {
  const Matrix z1 = gram_kernel(sys.gamma1, sys.x1.gram());
  const Matrix z2 = gram_kernel(sys.gamma2, sys.x2.gram());
  KernelRestriction out;
  out.z = block_diag({&z1, &z2});
  out.a_red = out.z.transpose() * sys.state_gram() * sys.structure_matrix() * out.z;
  return out;
}

void require_onto(const Matrix& gamma, const char* name) {
  const auto r = numerical_rank(gamma, kRankTol);
  if (r != gamma.rows()) {
    std::ostringstream os;
    os << name << " is not onto: rank " << r << " < " << gamma.rows();
    throw StructuralError(os.str());
  }
}

}  // namespace

double green_scale(const PortSystem& sys) {
  const double s = inf_norm(sys.L) + inf_norm(sys.K);
  return s > 0.0 ? s : 1.0;
}

double green_residual(const PortSystem& sys) {
  sys.validate_dimensions();
  Matrix r = sys.L.transpose() * sys.x2.gram() - sys.x1.gram() * sys.K;
  r -= sys.gamma1.transpose() * sys.u1.gram() * sys.beta2;
  r -= sys.beta1.transpose() * sys.u2.gram() * sys.gamma2;
  return inf_norm(r);
}

KernelRestriction kernel_restriction(const PortSystem& sys) {
  sys.validate_dimensions();
  require_onto(sys.gamma1, "gamma1");
  require_onto(sys.gamma2, "gamma2");
  return restrict_unchecked(sys);
}

bool BcsReport::all_pass() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const BcsCondition& c) { return c.pass; });
}

BcsReport check_bcs_conditions(const PortSystem& sys) {
  sys.validate_dimensions();
  BcsReport rep;
  rep.dim_u = sys.input_dim();
  rep.rank_g = numerical_rank(sys.gamma1, kRankTol) + numerical_rank(sys.gamma2, kRankTol);

  {
    BcsCondition c{"(i) G is onto", rep.rank_g == rep.dim_u, {}};
    std::ostringstream os;
    if (c.pass) {
      os << "rank(G) = dim(U) = " << rep.dim_u;
    } else {
      os << "(i) fails: rank deficit " << (rep.dim_u - rep.rank_g);
    }
    c.detail = os.str();
    rep.conditions.push_back(c);
  }

  const KernelRestriction kr = restrict_unchecked(sys);
  rep.kernel_dim = kr.z.cols();
  const auto k = kr.a_red.rows();
  rep.skew_residual = inf_norm(kr.a_red + kr.a_red.transpose());
  const double skew_scale = std::max(1.0, inf_norm(kr.a_red));
  {
    BcsCondition c{"(ii) A skew on ker G", rep.skew_residual <= 1e-12 * skew_scale, {}};
    std::ostringstream os;
    os << "||A_red + A_red^T|| = " << rep.skew_residual << ", dim ker G = " << rep.kernel_dim;
    c.detail = os.str();
    rep.conditions.push_back(c);
  }

  const Matrix id = Matrix::Identity(k, k);
  rep.cond_minus = condition_number(id - kr.a_red);
  rep.cond_plus = condition_number(id + kr.a_red);
  {
    BcsCondition c{"(iii) I - J onto on ker G", std::isfinite(rep.cond_minus) && rep.cond_minus < kInvertibleCond, {}};
    std::ostringstream os;
    os << "cond(I - A_red) = " << rep.cond_minus;
    c.detail = os.str();
    rep.conditions.push_back(c);
  }

  // Literal kernel of (I - J) restricted to ker G, in state coordinates.
  if (kr.z.cols() > 0) {
    const Matrix ij = Matrix::Identity(sys.state_dim(), sys.state_dim()) - sys.structure_matrix();
    rep.resolvent_kernel_dim = null_space(ij * kr.z, kRankTol).cols();
  }
  {
    BcsCondition c{"(iv) ker(I - J) on ker G is trivial", rep.resolvent_kernel_dim == 0, {}};
    std::ostringstream os;
    os << "dim = " << rep.resolvent_kernel_dim;
    c.detail = os.str();
    rep.conditions.push_back(c);
  }
  {
    BcsCondition c{"I + A onto on ker G", std::isfinite(rep.cond_plus) && rep.cond_plus < kInvertibleCond, {}};
    std::ostringstream os;
    os << "cond(I + A_red) = " << rep.cond_plus;
    c.detail = os.str();
    rep.conditions.push_back(c);
  }
  return rep;
}

OperatorSplit split_operator(const Matrix& j, const Matrix& g, const GramSpace& state) {
  const auto n = state.dim();
  require_shape(j, n, n, "split_operator: J");
  if (g.cols() != n) throw DimensionMismatch("split_operator: G column count differs from state dimension");
  const auto m = g.rows();
  OperatorSplit out;
  if (m == 0) {
    out.A = j;
    out.B = Matrix(n, 0);
    out.H = Matrix(n, 0);
    return out;
  }
  if (numerical_rank(g, kRankTol) != m) throw StructuralError("split_operator: G is rank-deficient");
  const Eigen::LLT<Matrix> mllt(state.gram());
  const Matrix mig = mllt.solve(g.transpose());  // M^-1 G^T
  const Matrix s = g * mig;
  out.H = mig * s.llt().solve(Matrix::Identity(m, m));
  const Matrix pi = Matrix::Identity(n, n) - out.H * g;
  out.A = j * pi;
  out.B = j * out.H;
  return out;
}

OperatorSplit split_operator(const PortSystem& sys) {
  sys.validate_dimensions();
  return split_operator(sys.structure_matrix(), sys.boundary_map(), GramSpace(sys.state_gram()));
}

OperatorSplit collocated_split(const PortSystem& sys) {
  sys.validate_dimensions();
  const Matrix m = sys.state_gram();
  const Matrix g = sys.boundary_map();
  const Matrix c = sys.observation_map();
  OperatorSplit out;
  out.B = m.llt().solve(c.transpose() * sys.input_gram());
  out.A = sys.structure_matrix() - out.B * g;
  if (g.rows() > 0 && numerical_rank(g, kRankTol) == g.rows()) {
    out.H = split_operator(sys.structure_matrix(), g, GramSpace(m)).H;
  } else {
    out.H = Matrix(m.rows(), 0);
  }
  return out;
}

double ExtendedOperator::skew_residual() const { return check_skew_symmetric_like(full, extended); }

ExtendedOperator assemble_extended(const PortSystem& sys, double tol) {
  const double res = green_residual(sys);
  const double scale = green_scale(sys);
  if (!(res <= tol * scale)) {
    std::ostringstream os;
    os << "assemble_extended: Green identity residual " << res << " exceeds " << tol << " * " << scale;
    throw StructuralError(os.str());
  }
  const OperatorSplit split = collocated_split(sys);
  ExtendedOperator op;
  op.A = split.A;
  op.B = split.B;
  op.C = sys.observation_map();
  op.state = GramSpace(sys.state_gram());
  op.input = GramSpace(sys.input_gram());
  op.extended = GramSpace(block_diag({&op.state.gram(), &op.input.gram()}));
  op.label = sys.label;
  const auto n = op.A.rows();
  const auto m = op.B.cols();
  op.full = Matrix::Zero(n + m, n + m);
  op.full.topLeftCorner(n, n) = op.A;
  op.full.topRightCorner(n, m) = op.B;
  op.full.bottomLeftCorner(m, n) = -op.C;
  return op;
}

double split_residual(const Matrix& j, const OperatorSplit& split, const Matrix& g) {
  return inf_norm(j - (split.A + split.B * g));
}

bool is_block_antidiagonal(const Matrix& b, const PortSystem& sys) {
  const auto n1 = sys.x1.dim();
  const auto n2 = sys.x2.dim();
  const auto m1 = sys.u1.dim();
  const auto m2 = sys.u2.dim();
  if (b.rows() != n1 + n2 || b.cols() != m1 + m2) return false;
  return max_abs(b.block(0, 0, n1, m1)) == 0.0 && max_abs(b.block(n1, m1, n2, m2)) == 0.0;
}

}  // namespace phs
