#pragma once

// Test oracles written without the library's SVD-based helpers: plain
// Gauss-Jordan elimination and modified Gram-Schmidt on std::vector data.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace oracle {

using Mat = std::vector<std::vector<double>>;

inline Mat to_rows(const Eigen::MatrixXd& m) {
  Mat out(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  }
  return out;
}

inline Eigen::MatrixXd from_cols(const std::vector<std::vector<double>>& cols, std::size_t n) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) out(i, j) = cols[j][i];
  }
  return out;
}

/// Reduced row echelon form with partial pivoting; returns pivot columns.
inline std::vector<std::size_t> rref(Mat& a, double tol) {
  std::vector<std::size_t> pivots;
  if (a.empty()) return pivots;
  const std::size_t rows = a.size();
  const std::size_t cols = a[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t best = r;
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (std::abs(a[i][c]) > std::abs(a[best][c])) best = i;
    }
    if (std::abs(a[best][c]) <= tol) continue;
    std::swap(a[r], a[best]);
    const double p = a[r][c];
    for (auto& v : a[r]) v /= p;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0.0) continue;
      const double f = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

/// Null space basis of m (columns), from the free variables of the RREF.
inline Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double tol = 1e-10) {
  Mat a = to_rows(m);
  const std::size_t n = static_cast<std::size_t>(m.cols());
  double scale = 0.0;
  for (const auto& row : a) {
    for (double v : row) scale = std::max(scale, std::abs(v));
  }
  const auto piv = rref(a, tol * std::max(1.0, scale));
  std::vector<bool> is_piv(n, false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<std::vector<double>> basis;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_piv[f]) continue;
    std::vector<double> v(n, 0.0);
    v[f] = 1.0;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -a[r][f];
    basis.push_back(v);
  }
  return from_cols(basis, n);
}

inline std::size_t rank(const Eigen::MatrixXd& m, double tol = 1e-10) {
  Mat a = to_rows(m);
  double scale = 0.0;
  for (const auto& row : a) {
    for (double v : row) scale = std::max(scale, std::abs(v));
  }
  return rref(a, tol * std::max(1.0, scale)).size();
}

/// Modified Gram-Schmidt; drops columns that become numerically dependent.
inline Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& m, double tol = 1e-10) {
  std::vector<Eigen::VectorXd> q;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Eigen::VectorXd v = m.col(j);
    const double n0 = v.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : q) v -= u.dot(v) * u;
    }
    if (v.norm() > tol * std::max(1.0, n0)) q.push_back(v / v.norm());
  }
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(q.size()));
  for (std::size_t j = 0; j < q.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = q[j];
  return out;
}

/// Largest distance of a unit vector in span(a) from span(b) and vice versa.
inline double span_gap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd qa = orthonormalize(a);
  const Eigen::MatrixXd qb = orthonormalize(b);
  if (qa.cols() != qb.cols()) return 1.0;
  double gap = 0.0;
  for (Eigen::Index j = 0; j < qa.cols(); ++j) gap = std::max(gap, (qa.col(j) - qb * (qb.transpose() * qa.col(j))).norm());
  for (Eigen::Index j = 0; j < qb.cols(); ++j) gap = std::max(gap, (qb.col(j) - qa * (qa.transpose() * qb.col(j))).norm());
  return gap;
}

/// Brute-force companion: all (f, e) with f^T M e_i + f_i^T M e = 0 for every column (f_i, e_i) of d.
inline Eigen::MatrixXd companion(const Eigen::MatrixXd& d, const Eigen::MatrixXd& gram) {
  const Eigen::Index n = gram.rows();
  Eigen::MatrixXd constraints(d.cols(), 2 * n);
  for (Eigen::Index i = 0; i < d.cols(); ++i) {
    const Eigen::VectorXd f = d.col(i).head(n);
    const Eigen::VectorXd e = d.col(i).tail(n);
    constraints.row(i).head(n) = (gram * e).transpose();
    constraints.row(i).tail(n) = (gram * f).transpose();
  }
  return null_space(constraints);
}

inline Eigen::MatrixXd random_matrix(std::mt19937& rng, Eigen::Index r, Eigen::Index c) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = u(rng);
  }
  return m;
}

/// Symmetric positive-definite, exactly symmetric.
inline Eigen::MatrixXd random_spd(std::mt19937& rng, Eigen::Index n) {
  const Eigen::MatrixXd a = random_matrix(rng, n, n);
  Eigen::MatrixXd s = a * a.transpose() + static_cast<double>(n) * Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) s(j, i) = s(i, j);
  }
  return s;
}

inline Eigen::MatrixXd random_skew(std::mt19937& rng, Eigen::Index n) {
  const Eigen::MatrixXd a = random_matrix(rng, n, n);
  return a - a.transpose();
}

}  // namespace oracle
