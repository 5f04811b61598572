#pragma once

#include <cstdint>
#include <vector>

#include "carv/caratheodory.hpp"
#include "carv/holomap.hpp"
#include "carv/norms.hpp"
#include "carv/projections.hpp"

namespace carv {

/// Result of the Cartan linearity check: all Taylor coefficients of pi o f
/// of order 2..max_order must vanish.
struct LinearityReport {
    bool passed = false;
    double max_offender = 0.0;
    std::vector<int> offender_alpha;
    int offender_component = -1;
    int coeffs_checked = 0;
    int max_order = 0;
    double radius = 0.0;
};

LinearityReport verify_linearity_of_pi_f(const MapExpr& f, const CMatrix& pi, int max_order = 4,
                                         double radius = 0.5);

struct RetractionVerification {
    int samples_used = 0;
    double idempotency = 0.0;       // max || r(r(y)) - r(y) ||
    double image_membership = 0.0;  // max || r(y) - f(g(r(y))) ||
    double fixes_image = 0.0;       // max || r(f(x)) - f(x) ||
    double inverse = 0.0;           // max || g(f(x)) - x ||
    double graph = 0.0;             // max || f(x) - (phi x + psi(phi x)) ||
    double ball_containment = 0.0;  // max || r(y) ||_n2 over sampled y
    double reverse_jacobian = 0.0;  // || r'(0) - pi ||_max
    NormCertificate reverse_norm;   // operator norm of r'(0)
    LinearityReport cartan;
};

/// The constructed retraction data: phi = pi o f'(0), psi the graph map,
/// r = pi + psi o pi the holomorphic retraction of B2 onto f(B1), and
/// g = phi^{-1} o pi the holomorphic inverse of f on its image.
struct RetractionBundle {
    MapExpr f;
    ProjectionBundle pi;
    CMatrix phi;
    MapExpr psi;
    MapExpr r;
    MapExpr g;
    RetractionVerification verification;
};

/// Build and verify the retraction from a ball map with isometric derivative
/// and a norm-1 projection onto its range. Throws LinearityViolation if the
/// Cartan check fails, VerificationFailure if a hypothesis or a residual
/// check fails.
RetractionBundle build_retraction(const MapExpr& f, const Norm& n1, const Norm& n2,
                                  const ProjectionBundle& pi, std::uint64_t seed = 1,
                                  int samples = 200, int max_order = 4);

/// Moebius conjugation moving a to the origin: f~ = phi_{-f(a)} o f o phi_a,
/// so f~(0) = 0. Both balls must be polydisks.
MapExpr conjugate_to_origin(const MapExpr& f, const CVector& a);

}  // namespace carv
