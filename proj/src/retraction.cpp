#include "carv/retraction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "carv/errors.hpp"
#include "carv/rng.hpp"

namespace carv {

LinearityReport verify_linearity_of_pi_f(const MapExpr& f, const CMatrix& pi, int max_order,
                                         double radius) {
    if (pi.cols() != f.dim_out())
        throw DimensionError("verify_linearity_of_pi_f: pi does not act on the target space");
    const CVector zero = CVector::Zero(f.dim_in());
    if (eval(f, zero).lpNorm<Eigen::Infinity>() > 1e-12)
        throw DomainError("verify_linearity_of_pi_f: f(0) != 0");
    if ((pi * pi - pi).cwiseAbs().maxCoeff() > 1e-9)
        throw DomainError("verify_linearity_of_pi_f: pi is not idempotent");

    const MapExpr pif = MapExpr::compose({MapExpr::linear(pi), f});
    const TaylorTable table = taylor_coeffs_range(pif, 2, max_order, radius);

    LinearityReport rep;
    rep.max_order = max_order;
    rep.radius = radius;
    for (const auto& [alpha, coeff] : table.coeffs) {
        for (Eigen::Index c = 0; c < coeff.size(); ++c) {
            ++rep.coeffs_checked;
            const double mod = std::abs(coeff(c));
            if (mod > rep.max_offender) {
                rep.max_offender = mod;
                rep.offender_alpha = alpha;
                rep.offender_component = static_cast<int>(c);
            }
        }
    }
    rep.passed = rep.max_offender <= 1e-8;
    return rep;
}

RetractionBundle build_retraction(const MapExpr& f, const Norm& n1, const Norm& n2,
                                  const ProjectionBundle& pi_bundle, std::uint64_t seed,
                                  int samples, int max_order) {
    if (f.dim_in() != n1.dim() || f.dim_out() != n2.dim())
        throw DimensionError("build_retraction: map does not match the norm pair");
    const Eigen::Index n = f.dim_in(), m = f.dim_out();
    const CVector zero_in = CVector::Zero(n);

    if (eval(f, zero_in).lpNorm<Eigen::Infinity>() > 1e-12)
        throw VerificationFailure("build_retraction: f(0) != 0");
    if (pi_bundle.norm_certificate.value > 1.0 + 1e-6)
        throw VerificationFailure(
            "build_retraction: projection norm certificate " +
            std::to_string(pi_bundle.norm_certificate.value) + " exceeds 1 + 1e-6");

    const CMatrix J0 = jacobian(f, zero_in);
    const IsometryVerdict iso = isometry_check(J0, n1, n2, 256, seed, 1e-6);
    if (!iso.is_isometry)
        throw VerificationFailure("build_retraction: f'(0) is not an isometry (deviation " +
                                  std::to_string(iso.max_deviation) + ")");

    const CMatrix& pi = pi_bundle.pi;
    if ((pi * J0 - J0).cwiseAbs().maxCoeff() > 1e-9)
        throw VerificationFailure("build_retraction: pi does not fix f'(0)(E1)");

    // Cartan uniqueness consequence: pi o f is the linear map phi = pi f'(0).
    LinearityReport cartan = verify_linearity_of_pi_f(f, pi, max_order, 0.5);
    if (!cartan.passed) {
        std::ostringstream os;
        os << "build_retraction: pi o f has a nonzero coefficient of modulus "
           << cartan.max_offender << " at order >= 2";
        throw LinearityViolation(os.str());
    }

    const CMatrix phi = pi * J0;
    const CMatrix phi_pinv = pseudo_inverse(phi);
    const CMatrix id_m = CMatrix::Identity(m, m);

    const MapExpr psi =
        MapExpr::compose({MapExpr::linear(id_m - pi), f, MapExpr::linear(phi_pinv)});
    const MapExpr r = MapExpr::sum(
        {MapExpr::linear(pi),
         MapExpr::compose({MapExpr::linear(id_m - pi), f, MapExpr::linear(phi_pinv * pi)})});
    const MapExpr g = MapExpr::linear(phi_pinv * pi);

    RetractionVerification ver;
    ver.cartan = cartan;

    // Sampled residual checks, radius 0.9 to stay clear of the boundary.
    Rng rng(seed ^ 0x8b7eb5275e59f1a7ULL);
    const auto sphere1 = unit_sphere_sample(n1, samples, seed + 1);
    std::vector<CVector> ball2;
    for (const auto& s : unit_sphere_sample(n2, samples, seed + 2))
        ball2.push_back(s * (0.9 * std::max(rng.uniform01(), 0.05)));
    // Include the projection-norm witness direction near the boundary: an
    // over-norm pi must fail the containment check loudly rather than slip
    // through sampling.
    try {
        const OperatorNormResult worst = operator_norm(pi, n2, n2, 1e-4);
        const double wn = norm_eval(n2, worst.witness);
        if (wn > 1e-12) ball2.push_back(worst.witness * (0.9 / wn));
    } catch (const NumericalFailure&) {
        // no tight witness available for this norm pair; sampling only
    }
    for (const auto& s : sphere1) {
        const CVector x = s * (0.9 * rng.uniform01());
        const CVector fx = eval(f, x);
        ver.fixes_image = std::max(ver.fixes_image, (eval(r, fx) - fx).lpNorm<Eigen::Infinity>());
        ver.inverse = std::max(ver.inverse, (eval(g, fx) - x).lpNorm<Eigen::Infinity>());
        const CVector phix = phi * x;
        ver.graph = std::max(ver.graph,
                             (fx - (phix + eval(psi, phix))).lpNorm<Eigen::Infinity>());
    }
    for (const auto& y : ball2) {
        const CVector ry = eval(r, y);
        ver.idempotency = std::max(ver.idempotency, (eval(r, ry) - ry).lpNorm<Eigen::Infinity>());
        ver.image_membership = std::max(
            ver.image_membership, (ry - eval(f, eval(g, ry))).lpNorm<Eigen::Infinity>());
        ver.ball_containment = std::max(ver.ball_containment, norm_eval(n2, ry));
    }
    ver.samples_used = static_cast<int>(sphere1.size() + ball2.size());

    // Reverse direction: r'(0) is the projection itself, of norm 1.
    const CMatrix Jr0 = jacobian(r, CVector::Zero(m));
    ver.reverse_jacobian = (Jr0 - pi).cwiseAbs().maxCoeff();
    {
        const OperatorNormResult on = operator_norm(Jr0, n2, n2, 1e-6);
        ver.reverse_norm.value = on.value;
        ver.reverse_norm.exact = on.exact;
        ver.reverse_norm.lower = on.lower;
        ver.reverse_norm.upper = on.upper;
    }

    const double worst_residual = std::max(
        {ver.idempotency, ver.image_membership, ver.fixes_image, ver.inverse, ver.graph});
    if (worst_residual > 1e-8 || ver.ball_containment >= 1.0) {
        std::ostringstream os;
        os << "build_retraction: verification failed (idempotency " << ver.idempotency
           << ", image membership " << ver.image_membership << ", fixes_image " << ver.fixes_image
           << ", inverse " << ver.inverse << ", graph " << ver.graph << ", ball containment "
           << ver.ball_containment << ")";
        throw VerificationFailure(os.str());
    }

    RetractionBundle bundle{f, pi_bundle, phi, psi, r, g, ver};
    return bundle;
}

MapExpr conjugate_to_origin(const MapExpr& f, const CVector& a) {
    if (a.size() != f.dim_in()) throw DimensionError("conjugate_to_origin: dim mismatch");
    if (a.lpNorm<Eigen::Infinity>() >= 1.0)
        throw DomainError("conjugate_to_origin: a outside the open polydisk");
    const CVector fa = eval(f, a);
    if (fa.lpNorm<Eigen::Infinity>() >= 1.0)
        throw DomainError("conjugate_to_origin: f(a) outside the target polydisk");
    const MapExpr conj =
        MapExpr::compose({moebius_automorphism(-fa), f, moebius_automorphism(a)});
    const double drift = eval(conj, CVector::Zero(f.dim_in())).lpNorm<Eigen::Infinity>();
    if (drift > 1e-12)
        throw VerificationFailure("conjugate_to_origin: conjugated map misses the origin by " +
                                  std::to_string(drift));
    return conj;
}

}  // namespace carv
