#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

namespace carv {

/// CLI exit codes: 0 verified/constructed, 1 property refuted,
/// 2 invalid input, 3 numerical failure.
enum ExitCode : int { kOk = 0, kRefuted = 1, kInvalidInput = 2, kNumericalFailure = 3 };

struct ScenarioOptions {
    double tol = 1e-6;
    std::uint64_t seed = 1;
    int samples = 1000;
    int max_order = 4;
    int budget = 100000;
};

struct ScenarioResult {
    int exit_code = kOk;
    nlohmann::json report;
};

/// Metric at the origin (any norm) or at a sup-ball base point.
ScenarioResult run_metric(const nlohmann::json& norm, const nlohmann::json& vector,
                          const nlohmann::json* base, const ScenarioOptions& opt);

/// Problem file: {"L": matrix, "source_norm": Norm, "target_norm": Norm}.
ScenarioResult run_check_isometry(const nlohmann::json& problem, const ScenarioOptions& opt);

/// method: auto | hilbert | supsource | c0 | search.
ScenarioResult run_find_projection(const nlohmann::json& problem, const std::string& method,
                                   const ScenarioOptions& opt);

ScenarioResult run_min_projection_norm(const nlohmann::json& problem, const ScenarioOptions& opt);

/// Problem file: {"f": MapExpr, "source_norm": Norm, "target_norm": Norm}.
ScenarioResult run_retract(const nlohmann::json& problem, const std::string& method,
                           const ScenarioOptions& opt);

/// The fixed finite-dimensional instance where property (V) fails.
ScenarioResult run_counterexample(const ScenarioOptions& opt);

/// Full base-point pipeline on a polydisk pair; `problem` may be null for
/// the built-in instance.
ScenarioResult run_corollary_demo(const nlohmann::json* problem, const ScenarioOptions& opt);

/// Plain-text summary rendered from the JSON report (single source of truth).
std::string render_text(const nlohmann::json& report);

}  // namespace carv
