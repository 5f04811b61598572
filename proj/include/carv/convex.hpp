#pragma once

#include <functional>

#include "carv/linalg.hpp"

namespace carv {

/// Primal-dual certificate for an l1-minimization solve.
/// `primal` is the objective of a feasible point, `dual` a valid lower
/// bound, so the optimum lies in [dual, primal].
struct L1Certificate {
    double primal = 0.0;
    double dual = 0.0;
    double gap = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct L1Solution {
    CVector x;
    L1Certificate cert;
};

/// minimize ||x||_1 subject to A x = b  (complex, sum of moduli).
/// ADMM with exact feasibility projections; the returned point satisfies
/// the constraints to machine precision and the certificate brackets the
/// optimum. Does not throw on non-convergence: check cert.converged.
L1Solution solve_l1_equality(const CMatrix& A, const CVector& b, double tol = 1e-6,
                             int budget = 100000);

/// Euclidean projection of y onto the complex l1 ball of given radius
/// (moduli are water-filled, phases preserved).
CVector project_l1_ball(const CVector& y, double radius);

/// Euclidean (Frobenius) projection of Y onto {X : sum_i ||row_i(X)||_inf <= radius},
/// the dual ball of the max-absolute-row-sum norm.
CMatrix project_row_sum_linf_ball(const CMatrix& Y, double radius);

/// sum_i ||row_i||_inf — the dual norm of the max-absolute-row-sum norm.
double row_linf_sum(const CMatrix& X);

/// max_i ||row_i||_1 — the induced sup->sup operator norm.
double max_abs_row_sum(const CMatrix& X);

/// Derivative-free local minimizer (Nelder-Mead) for the heuristic paths.
/// Returns the best point found; `evals` caps objective evaluations.
Eigen::VectorXd nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x0, double scale, int evals);

}  // namespace carv
