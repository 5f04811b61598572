#pragma once

#include <string>
#include <vector>

#include "carv/norms.hpp"

namespace carv {

struct NormCertificate {
    double value = 0.0;
    bool exact = false;
    double lower = 0.0;
    double upper = 0.0;
};

/// A projection onto an isometrically embedded subspace together with the
/// direct-sum data of the decomposition E2 = range oplus F.
struct ProjectionBundle {
    CMatrix pi;                           // m x m idempotent, fixes the range
    std::vector<CVector> range_basis;     // basis of L(E1)
    std::vector<CVector> complement_basis;  // basis of F = Ker(pi)
    CMatrix H;                            // left inverse of L, m -> n
    NormCertificate norm_certificate;
    std::string method;
};

struct BundleResiduals {
    double idempotency = 0.0;     // ||pi pi - pi||_max
    double range_fixing = 0.0;    // ||pi L - L||_max
    double decomposition = 0.0;   // distance of [range|complement] from full rank
    double kernel = 0.0;          // ||pi K||_max over complement basis K
};
BundleResiduals bundle_residuals(const ProjectionBundle& b);

/// Orthogonal projection onto range(L) in a complex Hilbert space:
/// pi = L (L* L)^{-1} L*. Throws WrongNormKind unless n2 is Euclidean.
ProjectionBundle project_hilbert(const CMatrix& L, const Norm& n2);

/// A functional given on a subspace by its values on a basis.
struct SubspaceFunctional {
    std::vector<CVector> basis;
    std::vector<Complex> values;
};

struct ExtensionResult {
    Covector h;
    double dual_norm = 0.0;
    double lower = 0.0;
    double gap = 0.0;
    int iterations = 0;
};

/// Minimal-dual-norm extension of g to the whole space (the Hahn-Banach
/// step, as a certified convex program over the affine extension family).
ExtensionResult min_norm_extension(const SubspaceFunctional& g, const Norm& n2, double tol = 1e-6,
                                   int budget = 100000);

/// Norm-1 projection for a sup-norm source: componentwise minimal-norm
/// extensions of the inverse's coordinates, pi = L H, F = Ker(pi).
/// Extension failures surface as NumericalFailure with the achieved norms.
ProjectionBundle property_v_supsource(const CMatrix& L, const Norm& n2, double tol = 1e-6,
                                      int budget = 100000);

/// The support-index data of a sup->sup isometry: for each source basis
/// vector the target row where its image attains modulus 1, the unimodular
/// values, and the verified vanishing of those rows off their column.
struct SupportIndexCertificate {
    std::vector<int> j_of_k;          // injective support map
    std::vector<Complex> lambda_k;    // L(e_k)_{j(k)}, unimodular
    std::vector<int> M;               // sorted support row set
    CMatrix phi;                      // pi_M o L, the induced surjective isometry
    struct VanishingCheck {
        int k;
        int l;
        double modulus;  // |L_{j(k), l}|, verified <= 1e-10
    };
    std::vector<VanishingCheck> vanishing_checks;
};
SupportIndexCertificate support_index_certificate(const CMatrix& L);

/// Norm-1 projection for sup->sup isometries: pi = L phi^{-1} pi_M with the
/// exact row-sum certificate.
ProjectionBundle property_v_c0(const CMatrix& L, const SupportIndexCertificate& cert);

struct MinProjectionResult {
    double value = 0.0;   // best certified upper bound on the minimal norm
    double lower = 0.0;   // certified lower bound (Sup targets)
    double gap = 0.0;
    CMatrix pi_best;
    bool certified = false;  // true only on the convex Sup-target path
    int iterations = 0;
};

/// Minimal operator norm over all projections onto span(range_basis).
/// Sup targets: convex (max-absolute-row-sum of L H), solved with a
/// primal-dual certificate. Other targets: best-found upper estimate,
/// flagged heuristic.
MinProjectionResult min_projection_norm(const std::vector<CVector>& range_basis, const Norm& n2,
                                        double tol = 1e-6, int budget = 100000);

/// Machine-checked obstruction report for the fixed instance
/// L(x,y) = (x, y, x+y): boundary faces force pi(e1) = pi(e2) = 0, which
/// contradicts pi fixing the range.
struct ObstructionReport {
    CMatrix L;
    double boundary_deviation = 0.0;  // max | ||(1,t,1)||_inf - 1 | over samples
    int boundary_samples = 0;
    struct FaceWitness {
        int candidate;        // index of the enumerated candidate projection
        int forced_basis;     // basis vector whose image is being forced (0 or 1)
        int coordinate;       // ambient coordinate pushed above 1
        double excess;        // ||pi y||_inf - 1 for the boundary witness y
    };
    std::vector<FaceWitness> face_witnesses;
    CVector pi_e1, pi_e2;     // forced values (zero vectors)
    CVector pi_e3;            // forced to L(1,1)/2
    CVector range_point;      // (1,0,1)
    CVector forced_value;     // forced pi(1,0,1) = (0.5, 0.5, 1)
    bool contradiction = false;
    double min_projection_value = 0.0;  // cross-reference from the convex program
    double min_projection_lower = 0.0;
    bool no_norm_one_projection = false;
};
ObstructionReport counterexample_obstruction(double tol = 1e-6, int budget = 200000);

}  // namespace carv
