#include "carv/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "carv/errors.hpp"
#include "carv/rng.hpp"

namespace carv {

Norm Norm::sup(int dim) {
    if (dim < 1) throw DimensionError("Norm::sup: dim must be >= 1");
    return Norm(NormKind::Sup, dim);
}

Norm Norm::euclidean(int dim) {
    if (dim < 1) throw DimensionError("Norm::euclidean: dim must be >= 1");
    return Norm(NormKind::Euclidean, dim);
}

Norm Norm::polyhedral(std::vector<Covector> functionals) {
    if (functionals.empty()) throw DimensionError("Norm::polyhedral: no functionals");
    const Eigen::Index n = functionals[0].size();
    CMatrix F(static_cast<Eigen::Index>(functionals.size()), n);
    for (std::size_t k = 0; k < functionals.size(); ++k) {
        if (functionals[k].size() != n) throw DimensionError("Norm::polyhedral: ragged functionals");
        if (!all_finite(functionals[k])) throw DomainError("Norm::polyhedral: non-finite entries");
        F.row(static_cast<Eigen::Index>(k)) = functionals[k].transpose();
    }
    if (matrix_rank(F) < n)
        throw RankDeficient("Norm::polyhedral: functionals are rank-deficient, norm not positive definite");
    Norm N(NormKind::Polyhedral, static_cast<int>(n));
    N.functionals_ = std::move(functionals);
    return N;
}

Norm Norm::pullback(CMatrix map, Norm inner) {
    if (!all_finite(map)) throw DomainError("Norm::pullback: non-finite map");
    if (map.rows() != inner.dim()) throw DimensionError("Norm::pullback: map rows must match inner dim");
    if (matrix_rank(map) < map.cols())
        throw RankDeficient("Norm::pullback: map is not injective, norm not positive definite");
    Norm N(NormKind::Pullback, static_cast<int>(map.cols()));
    N.map_ = std::move(map);
    N.inner_ = std::make_shared<Norm>(std::move(inner));
    return N;
}

double norm_eval(const Norm& N, const CVector& x) {
    if (x.size() != N.dim())
        throw DimensionError("norm_eval: vector has dim " + std::to_string(x.size()) +
                             ", norm expects " + std::to_string(N.dim()));
    switch (N.kind()) {
        case NormKind::Sup:
            return x.lpNorm<Eigen::Infinity>();
        case NormKind::Euclidean:
            return x.norm();
        case NormKind::Polyhedral: {
            double m = 0.0;
            for (const auto& f : N.functionals()) m = std::max(m, std::abs(pairing(f, x)));
            return m;
        }
        case NormKind::Pullback:
            return norm_eval(N.inner(), N.map() * x);
    }
    throw Error("norm_eval: unreachable");
}

AffineDualMinResult min_dual_norm_affine(const Norm& N, const CMatrix& M, const CVector& v,
                                         double tol, int budget) {
    if (M.cols() != N.dim()) throw DimensionError("min_dual_norm_affine: constraint shape mismatch");
    if (M.rows() != v.size()) throw DimensionError("min_dual_norm_affine: rhs shape mismatch");
    AffineDualMinResult out;
    switch (N.kind()) {
        case NormKind::Euclidean: {
            out.h = pseudo_inverse(M) * v;
            const double resid = (M * out.h - v).norm();
            if (resid > 1e-8 * std::max(1.0, v.norm()))
                throw NumericalFailure("min_dual_norm_affine: constraints inconsistent", resid);
            out.value = out.lower = out.h.norm();
            return out;
        }
        case NormKind::Sup: {
            const L1Solution sol = solve_l1_equality(M, v, tol, budget);
            out.h = sol.x;
            out.value = sol.cert.primal;
            out.lower = sol.cert.dual;
            out.gap = sol.cert.gap;
            out.iterations = sol.cert.iterations;
            if (!sol.cert.converged)
                throw NumericalFailure("min_dual_norm_affine: l1 solve did not certify", sol.cert.gap);
            return out;
        }
        case NormKind::Polyhedral: {
            // dual(h) = min ||c||_1 over decompositions h = sum_k c_k f_k.
            const CMatrix F = columns_to_matrix(N.functionals());  // dim x K
            const L1Solution sol = solve_l1_equality(M * F, v, tol, budget);
            out.h = F * sol.x;
            out.value = sol.cert.primal;
            out.lower = sol.cert.dual;
            out.gap = sol.cert.gap;
            out.iterations = sol.cert.iterations;
            if (!sol.cert.converged)
                throw NumericalFailure("min_dual_norm_affine: l1 solve did not certify", sol.cert.gap);
            return out;
        }
        case NormKind::Pullback: {
            // dual(h) = min{ dual_inner(w) : map^T w = h } by Hahn-Banach through the map.
            const CMatrix Mt = N.map().transpose();
            AffineDualMinResult rec = min_dual_norm_affine(N.inner(), M * Mt, v, tol, budget);
            out.h = Mt * rec.h;
            out.value = rec.value;
            out.lower = rec.lower;
            out.gap = rec.gap;
            out.iterations = rec.iterations;
            return out;
        }
    }
    throw Error("min_dual_norm_affine: unreachable");
}

DualNormCertificate dual_norm_eval_certified(const Norm& N, const Covector& g, double tol,
                                             int budget) {
    if (g.size() != N.dim()) throw DimensionError("dual_norm_eval: dimension mismatch");
    DualNormCertificate cert;
    switch (N.kind()) {
        case NormKind::Sup:
            cert.value = cert.lower = g.lpNorm<1>();
            cert.exact = true;
            return cert;
        case NormKind::Euclidean:
            cert.value = cert.lower = g.norm();
            cert.exact = true;
            return cert;
        case NormKind::Polyhedral: {
            // dual(g) = min ||c||_1 over decompositions g = sum_k c_k f_k.
            const CMatrix F = columns_to_matrix(N.functionals());
            const L1Solution sol = solve_l1_equality(F, g, tol, budget);
            if (!sol.cert.converged)
                throw NumericalFailure("dual_norm_eval: l1 solve did not certify", sol.cert.gap);
            cert.value = sol.cert.primal;
            cert.lower = sol.cert.dual;
            cert.gap = sol.cert.gap;
            cert.iterations = sol.cert.iterations;
            return cert;
        }
        case NormKind::Pullback: {
            // Minimal-norm extension through the map (Hahn-Banach equality).
            const AffineDualMinResult r =
                min_dual_norm_affine(N.inner(), N.map().transpose(), g, tol, budget);
            cert.value = r.value;
            cert.lower = r.lower;
            cert.gap = r.gap;
            cert.iterations = r.iterations;
            return cert;
        }
    }
    throw Error("dual_norm_eval: unreachable");
}

double dual_norm_eval(const Norm& N, const Covector& g, double tol) {
    return dual_norm_eval_certified(N, g, tol).value;
}

CVector dual_witness(const Norm& N, const Covector& g) {
    if (g.size() != N.dim()) throw DimensionError("dual_witness: dimension mismatch");
    switch (N.kind()) {
        case NormKind::Sup: {
            CVector x(g.size());
            for (Eigen::Index j = 0; j < g.size(); ++j) {
                const double m = std::abs(g(j));
                x(j) = m > 0 ? std::conj(g(j)) / m : Complex(1.0, 0.0);
            }
            return x;
        }
        case NormKind::Euclidean: {
            const double n = g.norm();
            if (n == 0) {
                CVector e = CVector::Zero(g.size());
                e(0) = 1.0;
                return e;
            }
            return g.conjugate() / n;
        }
        default:
            throw WrongNormKind("dual_witness: closed form only for Sup and Euclidean");
    }
}

std::vector<CVector> unit_sphere_sample(const Norm& N, int count, std::uint64_t seed) {
    if (count < 1) throw DomainError("unit_sphere_sample: count must be >= 1");
    Rng rng(seed);
    std::vector<CVector> out;
    out.reserve(static_cast<std::size_t>(count));
    while (static_cast<int>(out.size()) < count) {
        CVector v = rng.cgaussian_vector(N.dim());
        const double d = norm_eval(N, v);
        if (d < 1e-8) continue;
        v /= d;
        const double n1 = norm_eval(N, v);
        if (std::abs(n1 - 1.0) > 1e-13 && n1 > 0) v /= n1;  // one polish pass
        out.push_back(std::move(v));
    }
    return out;
}

namespace {

// Multi-start hill climb of ||A x||_to over the from-unit sphere; used for
// operator-norm lower bounds and the isometry refinement.
struct SampledMax {
    double value = 0.0;
    CVector witness;
};

SampledMax sampled_operator_lower(const CMatrix& A, const Norm& from, const Norm& to,
                                  int samples, std::uint64_t seed) {
    SampledMax best;
    best.witness = CVector::Zero(from.dim());
    const auto sphere = unit_sphere_sample(from, std::max(samples, 8), seed);
    for (const auto& x : sphere) {
        const double v = norm_eval(to, A * x);
        if (v > best.value) {
            best.value = v;
            best.witness = x;
        }
    }
    // Local refinement with shrinking random perturbations.
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    double step = 0.5;
    CVector cur = best.witness;
    double curval = best.value;
    for (int it = 0; it < 400; ++it) {
        CVector cand = cur + step * rng.cgaussian_vector(from.dim());
        const double d = norm_eval(from, cand);
        if (d < 1e-12) continue;
        cand /= d;
        const double v = norm_eval(to, A * cand);
        if (v > curval) {
            cur = cand;
            curval = v;
        } else {
            step *= 0.97;
        }
    }
    if (curval > best.value) {
        best.value = curval;
        best.witness = cur;
    }
    return best;
}

}  // namespace

OperatorNormResult operator_norm(const CMatrix& A, const Norm& from, const Norm& to, double tol) {
    if (A.cols() != from.dim() || A.rows() != to.dim())
        throw DimensionError("operator_norm: shape does not match the norm pair");
    OperatorNormResult res;

    // Pullback target: ||A x||_to = ||(map A) x||_inner.
    if (to.kind() == NormKind::Pullback) {
        res = operator_norm(to.map() * A, from, to.inner(), tol);
        res.exact = false;
        return res;
    }

    // Sup / Polyhedral target: exact reduction to dual norms of row functionals.
    if (to.kind() == NormKind::Sup || to.kind() == NormKind::Polyhedral) {
        std::vector<Covector> rows;
        if (to.kind() == NormKind::Sup) {
            for (Eigen::Index i = 0; i < A.rows(); ++i) rows.push_back(A.row(i).transpose());
        } else {
            for (const auto& f : to.functionals()) rows.push_back(A.transpose() * f);
        }
        double lo = 0.0, hi = 0.0;
        std::size_t best_row = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const DualNormCertificate c = dual_norm_eval_certified(from, rows[i], tol);
            lo = std::max(lo, c.lower);
            if (c.value > hi) {
                hi = c.value;
                best_row = i;
            }
        }
        res.lower = lo;
        res.upper = res.value = hi;
        res.exact = (from.kind() == NormKind::Sup && to.kind() == NormKind::Sup);
        if (from.kind() == NormKind::Sup || from.kind() == NormKind::Euclidean)
            res.witness = dual_witness(from, rows[best_row]);
        else
            res.witness = sampled_operator_lower(A, from, to, 64, 7).witness;
        return res;
    }

    // Euclidean target.
    if (from.kind() == NormKind::Euclidean) {
        Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeThinV);
        const double s = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
        res.value = res.lower = res.upper = s;
        res.witness = svd.singularValues().size() ? CVector(svd.matrixV().col(0))
                                                  : CVector::Zero(from.dim());
        return res;
    }
    if (to.dim() == 1) {  // one-dimensional Euclidean target is a functional norm
        const DualNormCertificate c = dual_norm_eval_certified(from, A.row(0).transpose(), tol);
        res.value = res.upper = c.value;
        res.lower = c.lower;
        res.witness = (from.kind() == NormKind::Sup) ? dual_witness(from, A.row(0).transpose())
                                                     : sampled_operator_lower(A, from, to, 64, 7).witness;
        return res;
    }

    // Remaining pairs: sampled lower bound plus coarse dual-norm upper bounds.
    const SampledMax lo = sampled_operator_lower(A, from, to, 512, 11);
    double upper = std::numeric_limits<double>::infinity();
    {
        double s2 = 0.0;  // ||Ax||_2^2 <= sum_i dual_from(row_i)^2
        for (Eigen::Index i = 0; i < A.rows(); ++i) {
            const double d = dual_norm_eval_certified(from, A.row(i).transpose(), tol).value;
            s2 += d * d;
        }
        upper = std::min(upper, std::sqrt(s2));
    }
    if (from.kind() == NormKind::Sup) {
        double colsum = 0.0;
        for (Eigen::Index j = 0; j < A.cols(); ++j) colsum += A.col(j).norm();
        upper = std::min(upper, colsum);
    }
    if (from.kind() == NormKind::Pullback) {
        // x = map^+ (map x) with map x ranging inside the inner unit ball.
        const OperatorNormResult rec =
            operator_norm(A * pseudo_inverse(from.map()), from.inner(), to, tol);
        upper = std::min(upper, rec.upper);
    }
    res.lower = lo.value;
    res.witness = lo.witness;
    res.upper = upper;
    res.value = upper;
    if (res.upper - res.lower > tol)
        throw NumericalFailure("operator_norm: bracket [" + std::to_string(res.lower) + ", " +
                                   std::to_string(res.upper) + "] wider than tol",
                               res.upper - res.lower);
    return res;
}

}  // namespace carv
