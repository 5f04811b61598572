#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "carv/convex.hpp"
#include "carv/linalg.hpp"

namespace carv {

enum class NormKind { Sup, Euclidean, Polyhedral, Pullback };

/// A covector acts by the bilinear pairing <g,x> = sum_j g_j x_j.
using Covector = CVector;

/// A positive-definite complex norm on C^n in one of four representations:
///   Sup          max_i |x_i|
///   Euclidean    (sum |x_i|^2)^(1/2)
///   Polyhedral   max_k |<f_k, x>| for a full-rank family of covectors
///   Pullback     ||M x||_inner for an injective map M
/// Degenerate representations are rejected at construction.
class Norm {
public:
    static Norm sup(int dim);
    static Norm euclidean(int dim);
    static Norm polyhedral(std::vector<Covector> functionals);
    static Norm pullback(CMatrix map, Norm inner);

    NormKind kind() const { return kind_; }
    /// Ambient dimension of the vectors the norm accepts.
    int dim() const { return dim_; }
    const std::vector<Covector>& functionals() const { return functionals_; }
    const CMatrix& map() const { return map_; }
    const Norm& inner() const { return *inner_; }

private:
    Norm(NormKind kind, int dim) : kind_(kind), dim_(dim) {}
    NormKind kind_;
    int dim_;
    std::vector<Covector> functionals_;
    CMatrix map_;
    std::shared_ptr<const Norm> inner_;
};

double norm_eval(const Norm& N, const CVector& x);

struct DualNormCertificate {
    double value = 0.0;  // certified upper bound on the dual norm
    double lower = 0.0;  // certified lower bound
    double gap = 0.0;
    int iterations = 0;
    bool exact = false;  // closed form (Sup / Euclidean)
};

/// sup{ |<g,x>| : ||x||_N <= 1 }. Closed forms for Sup (l1 sum) and
/// Euclidean (length); certified convex solves for Polyhedral and Pullback.
/// Throws NumericalFailure with the achieved gap on non-convergence.
double dual_norm_eval(const Norm& N, const Covector& g, double tol = 1e-6);
DualNormCertificate dual_norm_eval_certified(const Norm& N, const Covector& g, double tol = 1e-6,
                                             int budget = 100000);

/// Unit-ball maximizer of |<g,.>| in closed form (Sup / Euclidean only).
CVector dual_witness(const Norm& N, const Covector& g);

/// minimize dual_norm(N, h) over the affine family {h : M h = v}.
/// Reduces Polyhedral/Pullback recursively to an l1 solve or a least-norm
/// solve; the certificate brackets the optimum.
struct AffineDualMinResult {
    CVector h;
    double value = 0.0;
    double lower = 0.0;
    double gap = 0.0;
    int iterations = 0;
};
AffineDualMinResult min_dual_norm_affine(const Norm& N, const CMatrix& M, const CVector& v,
                                         double tol = 1e-6, int budget = 100000);

struct OperatorNormResult {
    double value = 0.0;  // certified upper bound (== exact value when exact)
    double lower = 0.0;  // certified lower bound
    double upper = 0.0;
    CVector witness;     // unit vector realizing `lower`
    bool exact = false;  // true only for the Sup->Sup row-sum formula
};

/// Induced operator norm of A : (C^n, from) -> (C^m, to).
/// Sup->Sup is the exact max-absolute-row-sum; polyhedral-type targets use
/// the exact reduction ||A|| = max_k dual_from(A^T f_k); Euclidean->Euclidean
/// is the largest singular value. Remaining pairs are bracketed by sampling
/// plus coarse upper bounds and throw NumericalFailure when the bracket
/// stays wider than tol.
OperatorNormResult operator_norm(const CMatrix& A, const Norm& from, const Norm& to,
                                 double tol = 1e-6);

/// Deterministic seeded samples with norm_eval == 1 to 1e-12.
std::vector<CVector> unit_sphere_sample(const Norm& N, int count, std::uint64_t seed);

}  // namespace carv
