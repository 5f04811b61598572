#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace carv {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Relative singular-value cutoff for all rank decisions.
inline constexpr double kRankTol = 1e-10;

/// Bilinear pairing <g, x> = sum_j g_j x_j (no conjugation).
inline Complex pairing(const CVector& g, const CVector& x) { return g.cwiseProduct(x).sum(); }

bool all_finite(const CVector& v);
bool all_finite(const CMatrix& A);

/// Numerical rank with the library-wide cutoff 1e-10 * sigma_max.
int matrix_rank(const CMatrix& A);

/// Least-squares solve; exact solve when A is square nonsingular.
/// Throws RankDeficient unless A has full column rank.
CVector solve_least_squares(const CMatrix& A, const CVector& b);

/// Orthonormal (Euclidean) basis of the null space of A; empty when injective.
std::vector<CVector> kernel_basis(const CMatrix& A);

/// Moore-Penrose pseudo-inverse via SVD.
CMatrix pseudo_inverse(const CMatrix& A);

/// Orthonormal basis of the column span, as matrix columns.
CMatrix orthonormal_range_basis(const CMatrix& A);

/// Columns of `vs` assembled into a matrix; throws DimensionError on ragged input.
CMatrix columns_to_matrix(const std::vector<CVector>& vs);

std::vector<CVector> matrix_to_columns(const CMatrix& A);

}  // namespace carv
