#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace phs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Induced infinity norm (max absolute row sum); 0 for empty matrices.
double inf_norm(const Matrix& m);

/// Max absolute entry; 0 for empty matrices.
double max_abs(const Matrix& m);

/// Numerical rank from singular values, threshold rel_tol * sigma_max.
Eigen::Index numerical_rank(const Matrix& m, double rel_tol);

/// Orthonormal basis (columns) of the null space of m, threshold rel_tol * sigma_max.
Matrix null_space(const Matrix& m, double rel_tol);

/// Orthonormal basis of the column span of m, threshold rel_tol * sigma_max.
Matrix orthonormal_span(const Matrix& m, double rel_tol);

/// 2-norm condition number via SVD; +inf when singular.
double condition_number(const Matrix& m);

Matrix block_diag(const std::vector<const Matrix*>& blocks);
Matrix kron(const Matrix& a, const Matrix& b);

/// Rows of `m` selected by `rows`, in order.
Matrix select_rows(const Matrix& m, const std::vector<Eigen::Index>& rows);

void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const std::string& what);

}  // namespace phs
