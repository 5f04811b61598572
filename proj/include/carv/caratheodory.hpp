#pragma once

#include <cstdint>
#include <string>

#include "carv/holomap.hpp"
#include "carv/norms.hpp"

namespace carv {

/// Outcome of an isometry certification. Refutations are exact (the witness
/// is a unit vector whose image norm deviates from 1); confirmations carry
/// the tolerance of the check that produced them.
struct IsometryVerdict {
    bool is_isometry = false;
    double max_deviation = 0.0;
    CVector witness;
    int samples_used = 0;
    std::string method;  // "structural-sup" or "sampled"
};

/// Caratheodory (== Kobayashi) infinitesimal metric at the origin of the
/// unit ball: exactly the norm, same code path.
double carath_origin(const Norm& N, const CVector& v);

/// Sampled dual-functional lower bound sup_g |<g,v>| over dual-ball
/// covectors; includes the closed-form maximizer for Sup/Euclidean.
double carath_origin_functional_bound(const Norm& N, const CVector& v, int samples,
                                      std::uint64_t seed);

/// Metric of the sup-norm ball at base point a: max_i |v_i| / (1 - |a_i|^2),
/// obtained by transporting to the origin with the Moebius automorphism.
double carath_supball(const CVector& a, const CVector& v);

/// Certify / refute ||A x||_to == ||x||_from on the unit sphere.
/// Sup->Sup runs the exact structural test (unimodular column supports,
/// support-row vanishing, row sums); other pairs sample and locally refine.
IsometryVerdict isometry_check(const CMatrix& A, const Norm& from, const Norm& to,
                               int samples = 512, std::uint64_t seed = 1, double tol = 1e-6);

struct SchwarzPickReport {
    bool passed = false;
    double max_violation_origin = 0.0;   // max over directions of ||f'(0)v|| - ||v||
    double max_violation_interior = 0.0; // sup-ball base points, when both norms are Sup
    int samples_used = 0;
};

/// Non-expansion of the metric under a ball map with f(0)=0: at the origin
/// for any norms, and at sampled interior base points when both balls are
/// polydisks. Throws DomainError if image samples exit the target ball.
SchwarzPickReport schwarz_pick_check(const MapExpr& f, const Norm& from, const Norm& to,
                                     int samples = 200, std::uint64_t seed = 1);

}  // namespace carv
