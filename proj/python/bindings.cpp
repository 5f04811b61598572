#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <string>
#include <vector>

#include "carv/caratheodory.hpp"
#include "carv/errors.hpp"
#include "carv/json_io.hpp"
#include "carv/projections.hpp"
#include "carv/retraction.hpp"
#include "carv/scenarios.hpp"

namespace py = pybind11;

namespace {

using carv::io::json;
using CList = std::vector<std::complex<double>>;
using CRows = std::vector<std::vector<std::complex<double>>>;

carv::CVector to_vector(const CList& v) {
    carv::CVector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
    return out;
}

CList from_vector(const carv::CVector& v) {
    CList out(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v(i);
    return out;
}

carv::CMatrix to_matrix(const CRows& rows) {
    if (rows.empty()) throw carv::InvalidInput("empty matrix");
    carv::CMatrix A(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size()) throw carv::InvalidInput("ragged matrix");
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return A;
}

CRows from_matrix(const carv::CMatrix& A) {
    CRows out(static_cast<std::size_t>(A.rows()));
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        out[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(A.cols()));
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = A(i, j);
    }
    return out;
}

carv::Norm parse_norm(const std::string& norm_json) {
    return carv::io::norm_from_json(json::parse(norm_json));
}

carv::MapExpr parse_map(const std::string& map_json) {
    return carv::io::map_from_json(json::parse(map_json));
}

carv::ScenarioOptions make_options(double tol, std::uint64_t seed, int samples, int max_order,
                                   int budget) {
    carv::ScenarioOptions opt;
    opt.tol = tol;
    opt.seed = seed;
    opt.samples = samples;
    opt.max_order = max_order;
    opt.budget = budget;
    return opt;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Caratheodory isometries, norm-1 projections and holomorphic retractions";

    py::register_exception<carv::InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<carv::DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<carv::DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<carv::RankDeficient>(m, "RankDeficient", PyExc_ValueError);
    py::register_exception<carv::WrongNormKind>(m, "WrongNormKind", PyExc_ValueError);
    py::register_exception<carv::NotAnIsometry>(m, "NotAnIsometry", PyExc_ValueError);
    py::register_exception<carv::VanishingViolation>(m, "VanishingViolation", PyExc_ValueError);
    py::register_exception<carv::LinearityViolation>(m, "LinearityViolation", PyExc_ValueError);
    py::register_exception<carv::VerificationFailure>(m, "VerificationFailure", PyExc_RuntimeError);
    py::register_exception<carv::NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);

    m.def("norm_eval",
          [](const std::string& norm, const CList& x) {
              return carv::norm_eval(parse_norm(norm), to_vector(x));
          },
          py::arg("norm"), py::arg("x"));

    m.def("dual_norm_eval",
          [](const std::string& norm, const CList& g, double tol) {
              return carv::dual_norm_eval(parse_norm(norm), to_vector(g), tol);
          },
          py::arg("norm"), py::arg("g"), py::arg("tol") = 1e-6);

    m.def("unit_sphere_sample",
          [](const std::string& norm, int count, std::uint64_t seed) {
              std::vector<CList> out;
              for (const auto& v : carv::unit_sphere_sample(parse_norm(norm), count, seed))
                  out.push_back(from_vector(v));
              return out;
          },
          py::arg("norm"), py::arg("count"), py::arg("seed") = 1);

    m.def("operator_norm",
          [](const CRows& A, const std::string& from, const std::string& to, double tol) {
              const carv::OperatorNormResult r =
                  carv::operator_norm(to_matrix(A), parse_norm(from), parse_norm(to), tol);
              return json{{"value", r.value},
                          {"lower", r.lower},
                          {"upper", r.upper},
                          {"exact", r.exact},
                          {"witness", carv::io::vector_to_json(r.witness)}}
                  .dump();
          },
          py::arg("A"), py::arg("from_norm"), py::arg("to_norm"), py::arg("tol") = 1e-6);

    m.def("map_eval",
          [](const std::string& map_json, const CList& x) {
              return from_vector(carv::eval(parse_map(map_json), to_vector(x)));
          },
          py::arg("map"), py::arg("x"));

    m.def("map_jacobian",
          [](const std::string& map_json, const CList& x) {
              return from_matrix(carv::jacobian(parse_map(map_json), to_vector(x)));
          },
          py::arg("map"), py::arg("x"));

    m.def("taylor_coeff",
          [](const std::string& map_json, const std::vector<int>& alpha, double radius) {
              carv::TaylorQuery q;
              q.multi_index = alpha;
              q.radius = radius;
              return from_vector(carv::taylor_coeff(parse_map(map_json), q));
          },
          py::arg("map"), py::arg("alpha"), py::arg("radius") = 0.5);

    m.def("carath_origin",
          [](const std::string& norm, const CList& v) {
              return carv::carath_origin(parse_norm(norm), to_vector(v));
          },
          py::arg("norm"), py::arg("v"));

    m.def("carath_supball",
          [](const CList& a, const CList& v) {
              return carv::carath_supball(to_vector(a), to_vector(v));
          },
          py::arg("a"), py::arg("v"));

    m.def("schwarz_pick_check",
          [](const std::string& map_json, const std::string& from, const std::string& to,
             int samples, std::uint64_t seed) {
              return carv::io::schwarz_to_json(
                         carv::schwarz_pick_check(parse_map(map_json), parse_norm(from),
                                                  parse_norm(to), samples, seed))
                  .dump();
          },
          py::arg("f"), py::arg("from_norm"), py::arg("to_norm"), py::arg("samples") = 200,
          py::arg("seed") = 1);

    m.def("min_norm_extension",
          [](const CRows& basis_rows, const CList& values, const std::string& norm, double tol,
             int budget) {
              carv::SubspaceFunctional g;
              for (const auto& row : basis_rows) g.basis.push_back(to_vector(row));
              g.values.assign(values.begin(), values.end());
              return carv::io::extension_to_json(
                         carv::min_norm_extension(g, parse_norm(norm), tol, budget))
                  .dump();
          },
          py::arg("basis"), py::arg("values"), py::arg("norm"), py::arg("tol") = 1e-6,
          py::arg("budget") = 100000);

    m.def("isometry_check",
          [](const CRows& A, const std::string& from, const std::string& to, int samples,
             std::uint64_t seed, double tol) {
              return carv::io::verdict_to_json(carv::isometry_check(
                                                   to_matrix(A), parse_norm(from), parse_norm(to),
                                                   samples, seed, tol))
                  .dump();
          },
          py::arg("A"), py::arg("from_norm"), py::arg("to_norm"), py::arg("samples") = 512,
          py::arg("seed") = 1, py::arg("tol") = 1e-6);

    m.def("project_hilbert",
          [](const CRows& L, const std::string& norm) {
              return carv::io::bundle_to_json(carv::project_hilbert(to_matrix(L), parse_norm(norm)))
                  .dump();
          },
          py::arg("L"), py::arg("target_norm"));

    m.def("property_v_supsource",
          [](const CRows& L, const std::string& norm, double tol, int budget) {
              return carv::io::bundle_to_json(
                         carv::property_v_supsource(to_matrix(L), parse_norm(norm), tol, budget))
                  .dump();
          },
          py::arg("L"), py::arg("target_norm"), py::arg("tol") = 1e-6,
          py::arg("budget") = 100000);

    m.def("support_index_certificate",
          [](const CRows& L) {
              return carv::io::support_certificate_to_json(
                         carv::support_index_certificate(to_matrix(L)))
                  .dump();
          },
          py::arg("L"));

    m.def("property_v_c0",
          [](const CRows& L) {
              const carv::CMatrix M = to_matrix(L);
              return carv::io::bundle_to_json(
                         carv::property_v_c0(M, carv::support_index_certificate(M)))
                  .dump();
          },
          py::arg("L"));

    m.def("min_projection_norm",
          [](const CRows& L, const std::string& norm, double tol, int budget) {
              return carv::io::min_projection_to_json(
                         carv::min_projection_norm(carv::matrix_to_columns(to_matrix(L)),
                                                   parse_norm(norm), tol, budget))
                  .dump();
          },
          py::arg("L"), py::arg("target_norm"), py::arg("tol") = 1e-6,
          py::arg("budget") = 100000);

    m.def("counterexample_obstruction",
          [](double tol, int budget) {
              return carv::io::obstruction_to_json(carv::counterexample_obstruction(tol, budget))
                  .dump();
          },
          py::arg("tol") = 1e-6, py::arg("budget") = 200000);

    m.def("verify_linearity",
          [](const std::string& map_json, const CRows& pi, int max_order, double radius) {
              return carv::io::linearity_to_json(carv::verify_linearity_of_pi_f(
                                                     parse_map(map_json), to_matrix(pi), max_order,
                                                     radius))
                  .dump();
          },
          py::arg("f"), py::arg("pi"), py::arg("max_order") = 4, py::arg("radius") = 0.5);

    m.def("run_scenario",
          [](const std::string& command, const std::string& problem_json, const std::string& method,
             double tol, std::uint64_t seed, int samples, int max_order, int budget) {
              const carv::ScenarioOptions opt =
                  make_options(tol, seed, samples, max_order, budget);
              carv::ScenarioResult result;
              if (command == "metric") {
                  const json p = json::parse(problem_json);
                  const json* base = p.contains("base") ? &p.at("base") : nullptr;
                  result = carv::run_metric(p.at("norm"), p.at("vector"), base, opt);
              } else if (command == "check-isometry") {
                  result = carv::run_check_isometry(json::parse(problem_json), opt);
              } else if (command == "find-projection") {
                  result = carv::run_find_projection(json::parse(problem_json), method, opt);
              } else if (command == "min-projection-norm") {
                  result = carv::run_min_projection_norm(json::parse(problem_json), opt);
              } else if (command == "retract") {
                  result = carv::run_retract(json::parse(problem_json), method, opt);
              } else if (command == "counterexample") {
                  result = carv::run_counterexample(opt);
              } else if (command == "corollary-demo") {
                  if (problem_json.empty()) {
                      result = carv::run_corollary_demo(nullptr, opt);
                  } else {
                      const json p = json::parse(problem_json);
                      result = carv::run_corollary_demo(&p, opt);
                  }
              } else {
                  throw carv::InvalidInput("unknown command \"" + command + "\"");
              }
              return py::make_tuple(result.exit_code, result.report.dump());
          },
          py::arg("command"), py::arg("problem") = "", py::arg("method") = "auto",
          py::arg("tol") = 1e-6, py::arg("seed") = 1, py::arg("samples") = 1000,
          py::arg("max_order") = 4, py::arg("budget") = 100000);

    m.attr("__version__") = "0.1.0";
}
