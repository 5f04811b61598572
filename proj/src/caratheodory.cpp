#include "carv/caratheodory.hpp"

#include <algorithm>
#include <cmath>

#include "carv/errors.hpp"
#include "carv/rng.hpp"

namespace carv {

double carath_origin(const Norm& N, const CVector& v) { return norm_eval(N, v); }

double carath_origin_functional_bound(const Norm& N, const CVector& v, int samples,
                                      std::uint64_t seed) {
    if (v.size() != N.dim()) throw DimensionError("carath_origin_functional_bound: dim mismatch");
    double best = 0.0;
    // Closed-form optimal functional where available.
    if (N.kind() == NormKind::Sup) {
        Eigen::Index i;
        v.cwiseAbs().maxCoeff(&i);
        Covector g = CVector::Zero(v.size());
        g(i) = std::abs(v(i)) > 0 ? std::conj(v(i)) / std::abs(v(i)) : Complex(1.0, 0.0);
        best = std::abs(pairing(g, v));  // dual norm of g is 1
    } else if (N.kind() == NormKind::Euclidean) {
        const double n = v.norm();
        if (n > 0) best = std::abs(pairing(CVector(v.conjugate() / n), v));
    }
    // Random covectors scaled to dual norm 1.
    Rng rng(seed);
    for (int s = 0; s < samples; ++s) {
        Covector g = rng.cgaussian_vector(v.size());
        const double d = dual_norm_eval(N, g, 1e-8);
        if (d < 1e-12) continue;
        best = std::max(best, std::abs(pairing(g, v)) / d);
    }
    return best;
}

double carath_supball(const CVector& a, const CVector& v) {
    if (a.size() != v.size()) throw DimensionError("carath_supball: dim mismatch");
    if (a.lpNorm<Eigen::Infinity>() >= 1.0)
        throw DomainError("carath_supball: base point outside the open polydisk");
    // Transport v to the origin along the automorphism sending a -> 0.
    const CMatrix J = jacobian(moebius_inverse(a), a);
    return carath_origin(Norm::sup(static_cast<int>(a.size())), J * v);
}

namespace {

IsometryVerdict structural_sup_check(const CMatrix& L, double tol) {
    const Eigen::Index m = L.rows(), n = L.cols();
    IsometryVerdict verdict;
    verdict.method = "structural-sup";
    verdict.witness = CVector::Zero(n);
    verdict.samples_used = 0;
    const Norm target = Norm::sup(static_cast<int>(m));

    auto refute = [&](const CVector& w) {
        CVector unit = w / w.lpNorm<Eigen::Infinity>();
        verdict.is_isometry = false;
        verdict.max_deviation = std::abs(norm_eval(target, L * unit) - 1.0);
        verdict.witness = unit;
    };

    double worst = 0.0;
    std::vector<Eigen::Index> support(static_cast<std::size_t>(n), -1);
    for (Eigen::Index k = 0; k < n; ++k) {
        // Column sup must be 1: witness e_k otherwise.
        Eigen::Index jmax;
        const double colsup = L.col(k).cwiseAbs().maxCoeff(&jmax);
        if (std::abs(colsup - 1.0) > 1e-12) {
            CVector w = CVector::Zero(n);
            w(k) = 1.0;
            refute(w);
            return verdict;
        }
        worst = std::max(worst, std::abs(colsup - 1.0));
        for (Eigen::Index j = 0; j < m; ++j)
            if (std::abs(std::abs(L(j, k)) - 1.0) <= 1e-12) {
                support[static_cast<std::size_t>(k)] = j;
                break;  // smallest index wins
            }
    }
    // Support rows must vanish off their column.
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index j = support[static_cast<std::size_t>(k)];
        for (Eigen::Index l = 0; l < n; ++l) {
            if (l == k) continue;
            const double off = std::abs(L(j, l));
            if (off > 1e-10) {
                // e_k + t e_l with the phase aligned to push row j above 1.
                CVector w = CVector::Zero(n);
                w(k) = 1.0;
                w(l) = L(j, k) * std::conj(L(j, l)) / (std::abs(L(j, k)) * off);
                refute(w);
                return verdict;
            }
            worst = std::max(worst, off);
        }
    }
    // Contraction: every row sum at most 1; phase witness otherwise.
    for (Eigen::Index j = 0; j < m; ++j) {
        const double rowsum = L.row(j).lpNorm<1>();
        if (rowsum > 1.0 + 1e-12) {
            CVector w(n);
            for (Eigen::Index l = 0; l < n; ++l) {
                const double mod = std::abs(L(j, l));
                w(l) = mod > 0 ? std::conj(L(j, l)) / mod : Complex(1.0, 0.0);
            }
            refute(w);
            return verdict;
        }
    }
    verdict.is_isometry = worst <= std::max(tol, 1e-12);
    verdict.max_deviation = worst;
    // Report a unit witness even on confirmation (the first basis direction).
    verdict.witness = CVector::Zero(n);
    verdict.witness(0) = 1.0;
    return verdict;
}

}  // namespace

IsometryVerdict isometry_check(const CMatrix& A, const Norm& from, const Norm& to, int samples,
                               std::uint64_t seed, double tol) {
    if (A.cols() != from.dim() || A.rows() != to.dim())
        throw DimensionError("isometry_check: shape does not match the norm pair");

    if (from.kind() == NormKind::Sup && to.kind() == NormKind::Sup)
        return structural_sup_check(A, tol);

    IsometryVerdict verdict;
    verdict.method = "sampled";
    const auto sphere = unit_sphere_sample(from, std::max(samples, 8), seed);
    verdict.samples_used = static_cast<int>(sphere.size());
    double worst = -1.0;
    CVector worst_x = sphere.front();
    for (const auto& x : sphere) {
        const double dev = std::abs(norm_eval(to, A * x) - 1.0);
        if (dev > worst) {
            worst = dev;
            worst_x = x;
        }
    }
    // Local refinement around the worst sample.
    Rng rng(seed ^ 0xda3e39cb94b95bdbULL);
    double step = 0.3;
    for (int it = 0; it < 400; ++it) {
        CVector cand = worst_x + step * rng.cgaussian_vector(from.dim());
        const double d = norm_eval(from, cand);
        if (d < 1e-12) continue;
        cand /= d;
        const double dev = std::abs(norm_eval(to, A * cand) - 1.0);
        if (dev > worst) {
            worst = dev;
            worst_x = cand;
        } else {
            step *= 0.97;
        }
    }
    verdict.max_deviation = worst;
    verdict.witness = worst_x;
    verdict.is_isometry = worst <= tol;
    return verdict;
}

SchwarzPickReport schwarz_pick_check(const MapExpr& f, const Norm& from, const Norm& to,
                                     int samples, std::uint64_t seed) {
    if (f.dim_in() != from.dim() || f.dim_out() != to.dim())
        throw DimensionError("schwarz_pick_check: map does not match the norm pair");
    const CVector zero = CVector::Zero(from.dim());
    if (eval(f, zero).lpNorm<Eigen::Infinity>() > 1e-12)
        throw DomainError("schwarz_pick_check: f(0) != 0");

    SchwarzPickReport report;
    const CMatrix J0 = jacobian(f, zero);
    const auto dirs = unit_sphere_sample(from, samples, seed);
    for (const auto& v : dirs)
        report.max_violation_origin =
            std::max(report.max_violation_origin, norm_eval(to, J0 * v) - 1.0);

    Rng rng(seed ^ 0xa0761d6478bd642fULL);
    const bool both_sup = from.kind() == NormKind::Sup && to.kind() == NormKind::Sup;
    int used = static_cast<int>(dirs.size());
    const auto base_pts = unit_sphere_sample(from, samples, seed + 1000);
    for (int s = 0; s < samples; ++s) {
        CVector x = base_pts[static_cast<std::size_t>(s)] * (0.9 * rng.uniform01());
        const CVector fx = eval(f, x);
        ++used;
        if (norm_eval(to, fx) >= 1.0)
            throw DomainError("schwarz_pick_check: image sample left the target ball");
        if (both_sup) {
            const CVector v = rng.cgaussian_vector(from.dim());
            const double lhs = carath_supball(fx, jacobian(f, x) * v);
            const double rhs = carath_supball(x, v);
            report.max_violation_interior =
                std::max(report.max_violation_interior, lhs - rhs);
        }
    }
    report.samples_used = used;
    report.passed = report.max_violation_origin <= 1e-9 &&
                    report.max_violation_interior <= 1e-9;
    return report;
}

}  // namespace carv
