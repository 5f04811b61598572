#include "carv/json_io.hpp"

#include <cmath>

#include "carv/errors.hpp"

namespace carv::io {

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InvalidInput("expected a complex scalar as [re, im]");
    const double re = j[0].get<double>(), im = j[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) throw InvalidInput("non-finite complex scalar");
    return {re, im};
}

json vector_to_json(const CVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

CVector vector_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw InvalidInput("expected a non-empty vector");
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    return v;
}

json matrix_to_json(const CMatrix& A) {
    json out = json::array();
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < A.cols(); ++k) row.push_back(complex_to_json(A(i, k)));
        out.push_back(std::move(row));
    }
    return out;
}

CMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw InvalidInput("expected a non-empty matrix");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty()) throw InvalidInput("expected matrix rows as arrays");
    const std::size_t cols = j[0].size();
    CMatrix A(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) throw InvalidInput("ragged matrix rows");
        for (std::size_t k = 0; k < cols; ++k)
            A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                complex_from_json(j[i][k]);
    }
    return A;
}

json norm_to_json(const Norm& N) {
    switch (N.kind()) {
        case NormKind::Sup:
            return json{{"kind", "sup"}, {"dim", N.dim()}};
        case NormKind::Euclidean:
            return json{{"kind", "euclidean"}, {"dim", N.dim()}};
        case NormKind::Polyhedral: {
            json fs = json::array();
            for (const auto& f : N.functionals()) fs.push_back(vector_to_json(f));
            return json{{"kind", "polyhedral"}, {"functionals", std::move(fs)}};
        }
        case NormKind::Pullback:
            return json{{"kind", "pullback"},
                        {"map", matrix_to_json(N.map())},
                        {"inner", norm_to_json(N.inner())}};
    }
    throw Error("norm_to_json: unreachable");
}

Norm norm_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) throw InvalidInput("norm: missing \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "sup") return Norm::sup(j.at("dim").get<int>());
    if (kind == "euclidean") return Norm::euclidean(j.at("dim").get<int>());
    if (kind == "polyhedral") {
        std::vector<Covector> fs;
        for (const auto& f : j.at("functionals")) fs.push_back(vector_from_json(f));
        return Norm::polyhedral(std::move(fs));
    }
    if (kind == "pullback")
        return Norm::pullback(matrix_from_json(j.at("map")), norm_from_json(j.at("inner")));
    throw InvalidInput("norm: unknown kind \"" + kind + "\"");
}

json map_to_json(const MapExpr& m) {
    switch (m.kind()) {
        case MapExpr::Kind::Identity:
            return json{{"kind", "identity"}, {"dim", m.dim_in()}};
        case MapExpr::Kind::Linear:
            return json{{"kind", "linear"}, {"matrix", matrix_to_json(m.matrix())}};
        case MapExpr::Kind::Moebius:
            return json{{"kind", "moebius"}, {"a", vector_to_json(m.moebius_parameter())}};
        case MapExpr::Kind::Polynomial: {
            json terms = json::array();
            for (const auto& t : m.terms())
                terms.push_back(json{{"alpha", t.alpha}, {"coeff", vector_to_json(t.coeff)}});
            return json{{"kind", "polynomial"},
                        {"dim_in", m.dim_in()},
                        {"dim_out", m.dim_out()},
                        {"terms", std::move(terms)}};
        }
        case MapExpr::Kind::Compose:
        case MapExpr::Kind::Sum: {
            json items = json::array();
            for (const auto& it : m.items()) items.push_back(map_to_json(it));
            return json{{"kind", m.kind() == MapExpr::Kind::Compose ? "compose" : "sum"},
                        {"items", std::move(items)}};
        }
    }
    throw Error("map_to_json: unreachable");
}

MapExpr map_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) throw InvalidInput("map: missing \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "identity") return MapExpr::identity(j.at("dim").get<int>());
    if (kind == "linear") return MapExpr::linear(matrix_from_json(j.at("matrix")));
    if (kind == "moebius") return MapExpr::moebius(vector_from_json(j.at("a")));
    if (kind == "polynomial") {
        std::vector<MapExpr::PolyTerm> terms;
        for (const auto& t : j.at("terms")) {
            MapExpr::PolyTerm term;
            term.alpha = t.at("alpha").get<std::vector<int>>();
            term.coeff = vector_from_json(t.at("coeff"));
            terms.push_back(std::move(term));
        }
        return MapExpr::polynomial(j.at("dim_in").get<int>(), j.at("dim_out").get<int>(),
                                   std::move(terms));
    }
    if (kind == "compose" || kind == "sum") {
        std::vector<MapExpr> items;
        for (const auto& it : j.at("items")) items.push_back(map_from_json(it));
        return kind == "compose" ? MapExpr::compose(std::move(items))
                                 : MapExpr::sum(std::move(items));
    }
    throw InvalidInput("map: unknown kind \"" + kind + "\"");
}

json verdict_to_json(const IsometryVerdict& v) {
    return json{{"is_isometry", v.is_isometry},
                {"max_deviation", v.max_deviation},
                {"witness", vector_to_json(v.witness)},
                {"samples_used", v.samples_used},
                {"method", v.method}};
}

json schwarz_to_json(const SchwarzPickReport& r) {
    return json{{"passed", r.passed},
                {"max_violation_origin", r.max_violation_origin},
                {"max_violation_interior", r.max_violation_interior},
                {"samples_used", r.samples_used}};
}

json extension_to_json(const ExtensionResult& e) {
    return json{{"h", vector_to_json(e.h)},
                {"dual_norm", e.dual_norm},
                {"lower", e.lower},
                {"gap", e.gap},
                {"iterations", e.iterations}};
}

json norm_certificate_to_json(const NormCertificate& c) {
    return json{{"value", c.value}, {"exact", c.exact}, {"lower", c.lower}, {"upper", c.upper}};
}

json bundle_to_json(const ProjectionBundle& b) {
    const BundleResiduals res = bundle_residuals(b);
    json rb = json::array(), cb = json::array();
    for (const auto& v : b.range_basis) rb.push_back(vector_to_json(v));
    for (const auto& v : b.complement_basis) cb.push_back(vector_to_json(v));
    return json{{"pi", matrix_to_json(b.pi)},
                {"H", matrix_to_json(b.H)},
                {"range_basis", std::move(rb)},
                {"complement_basis", std::move(cb)},
                {"norm_certificate", norm_certificate_to_json(b.norm_certificate)},
                {"method", b.method},
                {"residuals",
                 json{{"idempotency", res.idempotency},
                      {"range_fixing", res.range_fixing},
                      {"decomposition", res.decomposition},
                      {"kernel", res.kernel}}}};
}

json support_certificate_to_json(const SupportIndexCertificate& c) {
    json lambdas = json::array();
    for (const auto& l : c.lambda_k) lambdas.push_back(complex_to_json(l));
    json checks = json::array();
    for (const auto& v : c.vanishing_checks)
        checks.push_back(json{{"k", v.k}, {"l", v.l}, {"modulus", v.modulus}});
    return json{{"j_of_k", c.j_of_k},
                {"lambda_k", std::move(lambdas)},
                {"M", c.M},
                {"phi", matrix_to_json(c.phi)},
                {"vanishing_checks", std::move(checks)}};
}

json min_projection_to_json(const MinProjectionResult& r) {
    return json{{"value", r.value},
                {"lower", r.lower},
                {"gap", r.gap},
                {"pi_best", matrix_to_json(r.pi_best)},
                {"certified", r.certified},
                {"iterations", r.iterations}};
}

json obstruction_to_json(const ObstructionReport& r) {
    json witnesses = json::array();
    for (const auto& w : r.face_witnesses)
        witnesses.push_back(json{{"candidate", w.candidate},
                                 {"forced_basis", w.forced_basis},
                                 {"coordinate", w.coordinate},
                                 {"excess", w.excess}});
    return json{{"L", matrix_to_json(r.L)},
                {"boundary_deviation", r.boundary_deviation},
                {"boundary_samples", r.boundary_samples},
                {"face_witnesses", std::move(witnesses)},
                {"pi_e1", vector_to_json(r.pi_e1)},
                {"pi_e2", vector_to_json(r.pi_e2)},
                {"pi_e3", vector_to_json(r.pi_e3)},
                {"range_point", vector_to_json(r.range_point)},
                {"forced_value", vector_to_json(r.forced_value)},
                {"contradiction", r.contradiction},
                {"min_projection_value", r.min_projection_value},
                {"min_projection_lower", r.min_projection_lower},
                {"no_norm_one_projection", r.no_norm_one_projection}};
}

json linearity_to_json(const LinearityReport& r) {
    return json{{"passed", r.passed},
                {"max_offender", r.max_offender},
                {"offender_alpha", r.offender_alpha},
                {"offender_component", r.offender_component},
                {"coeffs_checked", r.coeffs_checked},
                {"max_order", r.max_order},
                {"radius", r.radius}};
}

json retraction_to_json(const RetractionBundle& b) {
    const RetractionVerification& v = b.verification;
    return json{{"f", map_to_json(b.f)},
                {"projection", bundle_to_json(b.pi)},
                {"phi", matrix_to_json(b.phi)},
                {"psi", map_to_json(b.psi)},
                {"r", map_to_json(b.r)},
                {"g", map_to_json(b.g)},
                {"verification",
                 json{{"samples_used", v.samples_used},
                      {"idempotency", v.idempotency},
                      {"image_membership", v.image_membership},
                      {"fixes_image", v.fixes_image},
                      {"inverse", v.inverse},
                      {"graph", v.graph},
                      {"ball_containment", v.ball_containment},
                      {"reverse_jacobian", v.reverse_jacobian},
                      {"reverse_norm", norm_certificate_to_json(v.reverse_norm)},
                      {"cartan", linearity_to_json(v.cartan)}}}};
}

}  // namespace carv::io
