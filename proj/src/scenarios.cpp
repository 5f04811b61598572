#include "carv/scenarios.hpp"

#include <cmath>
#include <sstream>

#include "carv/errors.hpp"
#include "carv/json_io.hpp"
#include "carv/retraction.hpp"
#include "carv/rng.hpp"

namespace carv {

using io::json;

namespace {

json options_to_json(const ScenarioOptions& opt) {
    return json{{"tol", opt.tol},
                {"seed", opt.seed},
                {"samples", opt.samples},
                {"max_order", opt.max_order},
                {"budget", opt.budget}};
}

struct Problem {
    CMatrix L;
    Norm source;
    Norm target;
};

Problem parse_problem(const json& problem) {
    if (!problem.is_object()) throw InvalidInput("problem: expected an object");
    if (!problem.contains("L") || !problem.contains("source_norm") ||
        !problem.contains("target_norm"))
        throw InvalidInput("problem: needs \"L\", \"source_norm\", \"target_norm\"");
    Problem p{io::matrix_from_json(problem.at("L")), io::norm_from_json(problem.at("source_norm")),
              io::norm_from_json(problem.at("target_norm"))};
    if (p.L.cols() != p.source.dim() || p.L.rows() != p.target.dim())
        throw InvalidInput("problem: L shape does not match the norms");
    return p;
}

std::string pick_method(const std::string& requested, const Norm& source, const Norm& target) {
    if (requested != "auto") return requested;
    if (target.kind() == NormKind::Euclidean) return "hilbert";
    if (source.kind() == NormKind::Sup && target.kind() == NormKind::Sup) return "c0";
    if (source.kind() == NormKind::Sup) return "supsource";
    return "search";
}

// Shared by find-projection and retract: construct a norm-1 projection onto
// range(L) by the requested route. Returns the report fragment and bundle.
struct ProjectionOutcome {
    bool found = false;
    ProjectionBundle bundle;
    json report;
};

ProjectionOutcome construct_projection(const CMatrix& L, const Norm& source, const Norm& target,
                                       const std::string& method, const ScenarioOptions& opt) {
    ProjectionOutcome out;
    out.report["method"] = method;
    if (method == "hilbert") {
        out.bundle = project_hilbert(L, target);
        out.found = true;
    } else if (method == "supsource") {
        if (source.kind() != NormKind::Sup)
            throw InvalidInput("find-projection: method supsource requires a sup source norm");
        out.bundle = property_v_supsource(L, target, opt.tol, opt.budget);
        out.found = true;
    } else if (method == "c0") {
        if (source.kind() != NormKind::Sup || target.kind() != NormKind::Sup)
            throw InvalidInput("find-projection: method c0 requires sup norms on both sides");
        const SupportIndexCertificate cert = support_index_certificate(L);
        out.report["support_certificate"] = io::support_certificate_to_json(cert);
        out.bundle = property_v_c0(L, cert);
        out.found = true;
    } else if (method == "search") {
        const MinProjectionResult r =
            min_projection_norm(matrix_to_columns(L), target, opt.tol, opt.budget);
        out.report["min_projection"] = io::min_projection_to_json(r);
        if (r.value <= 1.0 + opt.tol) {
            ProjectionBundle b;
            b.pi = r.pi_best;
            b.H = pseudo_inverse(L) * r.pi_best;
            b.range_basis = matrix_to_columns(L);
            b.complement_basis = kernel_basis(r.pi_best);
            b.norm_certificate.value = r.value;
            b.norm_certificate.lower = r.lower;
            b.norm_certificate.upper = r.value;
            b.norm_certificate.exact = false;
            b.method = "search";
            out.bundle = std::move(b);
            out.found = true;
        }
    } else {
        throw InvalidInput("find-projection: unknown method \"" + method + "\"");
    }
    if (out.found) out.report["bundle"] = io::bundle_to_json(out.bundle);
    return out;
}

}  // namespace

ScenarioResult run_metric(const json& norm, const json& vector, const json* base,
                          const ScenarioOptions& opt) {
    const Norm N = io::norm_from_json(norm);
    const CVector v = io::vector_from_json(vector);
    ScenarioResult res;
    res.report["command"] = "metric";
    res.report["options"] = options_to_json(opt);
    res.report["norm"] = io::norm_to_json(N);
    res.report["vector"] = io::vector_to_json(v);
    if (base != nullptr) {
        if (N.kind() != NormKind::Sup)
            throw InvalidInput("metric: base-point evaluation is available on sup balls only");
        const CVector a = io::vector_from_json(*base);
        const double value = carath_supball(a, v);
        res.report["base_point"] = io::vector_to_json(a);
        res.report["caratheodory"] = value;
    } else {
        const double value = carath_origin(N, v);
        const double bound =
            carath_origin_functional_bound(N, v, std::min(opt.samples, 256), opt.seed);
        res.report["caratheodory"] = value;
        // At the origin of a unit ball the Kobayashi metric coincides.
        res.report["kobayashi"] = value;
        res.report["functional_lower_bound"] = bound;
        res.report["bound_gap"] = value - bound;
    }
    res.exit_code = kOk;
    return res;
}

ScenarioResult run_check_isometry(const json& problem, const ScenarioOptions& opt) {
    const Problem p = parse_problem(problem);
    const IsometryVerdict v =
        isometry_check(p.L, p.source, p.target, opt.samples, opt.seed, opt.tol);
    ScenarioResult res;
    res.report["command"] = "check-isometry";
    res.report["options"] = options_to_json(opt);
    res.report["problem"] = problem;
    res.report["verdict"] = io::verdict_to_json(v);
    res.exit_code = v.is_isometry ? kOk : kRefuted;
    return res;
}

ScenarioResult run_find_projection(const json& problem, const std::string& method,
                                   const ScenarioOptions& opt) {
    const Problem p = parse_problem(problem);
    ScenarioResult res;
    res.report["command"] = "find-projection";
    res.report["options"] = options_to_json(opt);
    res.report["problem"] = problem;

    const IsometryVerdict v =
        isometry_check(p.L, p.source, p.target, opt.samples, opt.seed, opt.tol);
    res.report["isometry"] = io::verdict_to_json(v);
    if (!v.is_isometry) {
        res.report["conclusion"] = "not an isometry";
        res.exit_code = kRefuted;
        return res;
    }

    const std::string chosen = pick_method(method, p.source, p.target);
    const ProjectionOutcome out = construct_projection(p.L, p.source, p.target, chosen, opt);
    res.report["projection"] = out.report;
    if (out.found) {
        res.report["conclusion"] = "norm-1 projection constructed";
        res.exit_code = kOk;
    } else {
        res.report["conclusion"] = "no norm-1 projection onto the range";
        res.exit_code = kRefuted;
    }
    return res;
}

ScenarioResult run_min_projection_norm(const json& problem, const ScenarioOptions& opt) {
    if (!problem.is_object()) throw InvalidInput("problem: expected an object");
    std::vector<CVector> basis;
    if (problem.contains("range_basis")) {
        for (const auto& b : problem.at("range_basis")) basis.push_back(io::vector_from_json(b));
    } else if (problem.contains("L")) {
        basis = matrix_to_columns(io::matrix_from_json(problem.at("L")));
    } else {
        throw InvalidInput("min-projection-norm: needs \"range_basis\" or \"L\"");
    }
    const Norm target = io::norm_from_json(problem.at("target_norm"));
    const MinProjectionResult r = min_projection_norm(basis, target, opt.tol, opt.budget);
    ScenarioResult res;
    res.report["command"] = "min-projection-norm";
    res.report["options"] = options_to_json(opt);
    res.report["problem"] = problem;
    res.report["result"] = io::min_projection_to_json(r);
    res.exit_code = kOk;
    return res;
}

ScenarioResult run_retract(const json& problem, const std::string& method,
                           const ScenarioOptions& opt) {
    if (!problem.is_object() || !problem.contains("f") || !problem.contains("source_norm") ||
        !problem.contains("target_norm"))
        throw InvalidInput("retract: needs \"f\", \"source_norm\", \"target_norm\"");
    const MapExpr f = io::map_from_json(problem.at("f"));
    const Norm n1 = io::norm_from_json(problem.at("source_norm"));
    const Norm n2 = io::norm_from_json(problem.at("target_norm"));
    if (f.dim_in() != n1.dim() || f.dim_out() != n2.dim())
        throw InvalidInput("retract: map does not match the norms");

    ScenarioResult res;
    res.report["command"] = "retract";
    res.report["options"] = options_to_json(opt);
    res.report["problem"] = problem;

    const CVector zero = CVector::Zero(f.dim_in());
    if (eval(f, zero).lpNorm<Eigen::Infinity>() > 1e-12)
        throw InvalidInput("retract: f(0) != 0 (use corollary-demo for base-point conjugation)");

    const CMatrix J0 = jacobian(f, zero);
    const IsometryVerdict v = isometry_check(J0, n1, n2, opt.samples, opt.seed, opt.tol);
    res.report["isometry"] = io::verdict_to_json(v);
    if (!v.is_isometry) {
        res.report["conclusion"] = "f'(0) is not an isometry";
        res.exit_code = kRefuted;
        return res;
    }

    const std::string chosen = pick_method(method, n1, n2);
    const ProjectionOutcome out = construct_projection(J0, n1, n2, chosen, opt);
    res.report["projection"] = out.report;
    if (!out.found) {
        res.report["conclusion"] = "no norm-1 projection onto f'(0)(E1)";
        res.exit_code = kRefuted;
        return res;
    }

    const RetractionBundle bundle =
        build_retraction(f, n1, n2, out.bundle, opt.seed, std::min(opt.samples, 512), opt.max_order);
    res.report["retraction"] = io::retraction_to_json(bundle);
    res.report["conclusion"] = "holomorphic retraction constructed";
    res.exit_code = kOk;
    return res;
}

ScenarioResult run_counterexample(const ScenarioOptions& opt) {
    ScenarioResult res;
    res.report["command"] = "counterexample";
    res.report["options"] = options_to_json(opt);

    CMatrix L(3, 2);
    L << Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(1, 0);
    const Norm target = Norm::sup(3);
    const Norm source = Norm::pullback(L, target);
    res.report["L"] = io::matrix_to_json(L);
    res.report["source_norm"] = io::norm_to_json(source);
    res.report["target_norm"] = io::norm_to_json(target);

    const IsometryVerdict v = isometry_check(L, source, target, opt.samples, opt.seed, opt.tol);
    res.report["isometry"] = io::verdict_to_json(v);

    const ObstructionReport obs = counterexample_obstruction(opt.tol, opt.budget);
    res.report["obstruction"] = io::obstruction_to_json(obs);
    res.report["conclusion"] =
        obs.no_norm_one_projection ? "no norm-1 projection exists: property (V) fails"
                                   : "obstruction incomplete";
    res.exit_code = obs.no_norm_one_projection ? kRefuted : kNumericalFailure;
    return res;
}

ScenarioResult run_corollary_demo(const json* problem, const ScenarioOptions& opt) {
    ScenarioResult res;
    res.report["command"] = "corollary-demo";
    res.report["options"] = options_to_json(opt);

    MapExpr f = MapExpr::identity(1);
    CVector a;
    Norm n1 = Norm::sup(1), n2 = Norm::sup(1);
    if (problem != nullptr) {
        f = io::map_from_json(problem->at("f"));
        a = io::vector_from_json(problem->at("a"));
        n1 = io::norm_from_json(problem->at("source_norm"));
        n2 = io::norm_from_json(problem->at("target_norm"));
    } else {
        // Built-in instance: polydisk source Delta^2, target Delta^3,
        // f = phi_c o L0 o phi_{-a} with a != 0, so f'(a) is a Caratheodory
        // isometry at a but f(0) != 0.
        a = CVector(2);
        a << Complex(0.3, 0), Complex(0, -0.2);
        CMatrix L0(3, 2);
        L0 << Complex(0, 0), Complex(1, 0), Complex(0, 1), Complex(0, 0), Complex(0.3, 0),
            Complex(0.4, 0);
        CVector c(3);
        c << Complex(0.1, 0), Complex(0, 0), Complex(0, 0.2);
        f = MapExpr::compose(
            {moebius_automorphism(c), MapExpr::linear(L0), moebius_automorphism(-a)});
        n1 = Norm::sup(2);
        n2 = Norm::sup(3);
    }
    if (n1.kind() != NormKind::Sup || n2.kind() != NormKind::Sup)
        throw InvalidInput("corollary-demo: both balls must be polydisks");
    res.report["f"] = io::map_to_json(f);
    res.report["a"] = io::vector_to_json(a);

    // Base-point reduction (Moebius conjugation), then the origin pipeline.
    const MapExpr ft = conjugate_to_origin(f, a);
    const CVector zero = CVector::Zero(ft.dim_in());
    res.report["conjugated_origin_drift"] =
        eval(ft, zero).lpNorm<Eigen::Infinity>();

    const CMatrix J0 = jacobian(ft, zero);
    const IsometryVerdict v = isometry_check(J0, n1, n2, opt.samples, opt.seed, opt.tol);
    res.report["isometry"] = io::verdict_to_json(v);
    if (!v.is_isometry) {
        res.report["conclusion"] = "conjugated derivative is not an isometry";
        res.exit_code = kRefuted;
        return res;
    }

    // Caratheodory isometry at the base point: compare ||f~'(0)v|| with the
    // metric of the source ball at a transported along phi_a.
    {
        Rng rng(opt.seed ^ 0x2545f4914f6cdd1dULL);
        const CMatrix Ja0 = jacobian(moebius_automorphism(a), CVector::Zero(a.size()));
        double dev = 0.0;
        for (int s = 0; s < 64; ++s) {
            const CVector w = rng.cgaussian_vector(a.size());
            const double lhs = norm_eval(n2, J0 * w);
            const double rhs = carath_supball(a, Ja0 * w);
            dev = std::max(dev, std::abs(lhs - rhs));
        }
        res.report["base_point_isometry_deviation"] = dev;
    }

    const ProjectionOutcome out = construct_projection(J0, n1, n2, "c0", opt);
    res.report["projection"] = out.report;
    const RetractionBundle bundle =
        build_retraction(ft, n1, n2, out.bundle, opt.seed, std::min(opt.samples, 512), opt.max_order);
    res.report["retraction"] = io::retraction_to_json(bundle);
    res.report["conclusion"] = "holomorphic retraction constructed from the base-point data";
    res.exit_code = kOk;
    return res;
}

namespace {

void render_lines(const json& j, const std::string& prefix, std::ostringstream& os) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items())
            render_lines(value, prefix.empty() ? key : prefix + "." + key, os);
    } else {
        os << prefix << ": " << j.dump() << "\n";
    }
}

}  // namespace

std::string render_text(const json& report) {
    std::ostringstream os;
    if (report.contains("command")) os << "== carv " << report["command"].get<std::string>() << "\n";
    if (report.contains("conclusion"))
        os << "conclusion: " << report["conclusion"].get<std::string>() << "\n";
    for (const auto& [key, value] : report.items()) {
        if (key == "command" || key == "conclusion") continue;
        render_lines(value, key, os);
    }
    return os.str();
}

}  // namespace carv
