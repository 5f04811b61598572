#include "carv/linalg.hpp"

#include <Eigen/SVD>

#include "carv/errors.hpp"

namespace carv {

bool all_finite(const CVector& v) { return v.allFinite(); }
bool all_finite(const CMatrix& A) { return A.allFinite(); }

namespace {

int rank_from_singular_values(const Eigen::VectorXd& s) {
    if (s.size() == 0) return 0;
    const double cut = kRankTol * s(0);
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > cut) ++r;
    return r;
}

}  // namespace

int matrix_rank(const CMatrix& A) {
    if (A.size() == 0) return 0;
    Eigen::JacobiSVD<CMatrix> svd(A);
    return rank_from_singular_values(svd.singularValues());
}

CVector solve_least_squares(const CMatrix& A, const CVector& b) {
    if (A.rows() != b.size())
        throw DimensionError("solve_least_squares: A has " + std::to_string(A.rows()) +
                             " rows but b has " + std::to_string(b.size()) + " entries");
    Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (rank_from_singular_values(svd.singularValues()) < A.cols())
        throw RankDeficient("solve_least_squares: A is rank-deficient");
    return svd.solve(b);
}

std::vector<CVector> kernel_basis(const CMatrix& A) {
    Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeFullV);
    const int r = rank_from_singular_values(svd.singularValues());
    std::vector<CVector> basis;
    for (Eigen::Index j = r; j < A.cols(); ++j) basis.push_back(svd.matrixV().col(j));
    return basis;
}

CMatrix pseudo_inverse(const CMatrix& A) {
    Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    const double cut = s.size() ? kRankTol * s(0) : 0.0;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > cut) inv(i) = 1.0 / s(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

CMatrix orthonormal_range_basis(const CMatrix& A) {
    Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeThinU);
    const int r = rank_from_singular_values(svd.singularValues());
    return svd.matrixU().leftCols(r);
}

CMatrix columns_to_matrix(const std::vector<CVector>& vs) {
    if (vs.empty()) throw DimensionError("columns_to_matrix: no columns");
    CMatrix A(vs[0].size(), static_cast<Eigen::Index>(vs.size()));
    for (std::size_t j = 0; j < vs.size(); ++j) {
        if (vs[j].size() != A.rows()) throw DimensionError("columns_to_matrix: ragged columns");
        A.col(static_cast<Eigen::Index>(j)) = vs[j];
    }
    return A;
}

std::vector<CVector> matrix_to_columns(const CMatrix& A) {
    std::vector<CVector> cols;
    cols.reserve(static_cast<std::size_t>(A.cols()));
    for (Eigen::Index j = 0; j < A.cols(); ++j) cols.push_back(A.col(j));
    return cols;
}

}  // namespace carv
