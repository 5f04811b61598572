#pragma once

#include <nlohmann/json.hpp>

#include "carv/caratheodory.hpp"
#include "carv/holomap.hpp"
#include "carv/norms.hpp"
#include "carv/projections.hpp"
#include "carv/retraction.hpp"

namespace carv::io {

using json = nlohmann::json;

// Scalars serialize as [re, im]; vectors as lists of scalars; matrices as
// row-major nested lists. Round-trips are bit-exact for finite doubles.
json complex_to_json(const Complex& z);
Complex complex_from_json(const json& j);

json vector_to_json(const CVector& v);
CVector vector_from_json(const json& j);

json matrix_to_json(const CMatrix& A);
CMatrix matrix_from_json(const json& j);

json norm_to_json(const Norm& N);
Norm norm_from_json(const json& j);

json map_to_json(const MapExpr& m);
MapExpr map_from_json(const json& j);

json verdict_to_json(const IsometryVerdict& v);
json schwarz_to_json(const SchwarzPickReport& r);
json extension_to_json(const ExtensionResult& e);
json norm_certificate_to_json(const NormCertificate& c);
json bundle_to_json(const ProjectionBundle& b);
json support_certificate_to_json(const SupportIndexCertificate& c);
json min_projection_to_json(const MinProjectionResult& r);
json obstruction_to_json(const ObstructionReport& r);
json linearity_to_json(const LinearityReport& r);
json retraction_to_json(const RetractionBundle& b);

}  // namespace carv::io
