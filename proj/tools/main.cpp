#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "carv/errors.hpp"
#include "carv/scenarios.hpp"

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw carv::InvalidInput("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw carv::InvalidInput(std::string("cannot parse ") + path + ": " + e.what());
    }
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

// The envelope carries the timestamp; the report itself is deterministic for
// a fixed scenario and seed.
void emit(const carv::ScenarioResult& result, const std::string& out_path,
          const std::string& format) {
    std::string payload;
    if (format == "text") {
        payload = carv::render_text(result.report);
    } else {
        json envelope;
        envelope["meta"] = {{"tool", "carv"},
                            {"version", "0.1.0"},
                            {"generated_at", iso_timestamp()},
                            {"exit_code", result.exit_code}};
        envelope["report"] = result.report;
        payload = envelope.dump(2) + "\n";
    }
    if (out_path.empty()) {
        std::cout << payload;
    } else {
        std::ofstream out(out_path);
        if (!out) throw carv::InvalidInput("cannot write " + out_path);
        out << payload;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified Caratheodory isometries, norm-1 projections and holomorphic retractions"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    carv::ScenarioOptions opt;
    std::string out_path;
    std::string format = "json";
    app.add_option("--tol", opt.tol, "certificate tolerance")->capture_default_str();
    app.add_option("--seed", opt.seed, "random seed")->capture_default_str();
    app.add_option("--samples", opt.samples, "sample count")->capture_default_str();
    app.add_option("--max-order", opt.max_order, "Taylor order for the linearity check")
        ->capture_default_str();
    app.add_option("--budget", opt.budget, "iteration budget for convex solves")
        ->capture_default_str();
    app.add_option("--out", out_path, "write the report to a file instead of stdout");
    app.add_option("--format", format, "json | text")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();

    std::string norm_path, vector_path, base_path, problem_path;
    std::string method = "auto";

    auto* metric = app.add_subcommand("metric", "Caratheodory metric of a unit ball");
    metric->add_option("--norm", norm_path, "norm JSON file")->required();
    metric->add_option("--vector", vector_path, "tangent vector JSON file")->required();
    metric->add_option("--base", base_path, "base point JSON file (sup balls only)");

    auto* check = app.add_subcommand("check-isometry", "certify or refute a linear isometry");
    check->add_option("--problem", problem_path, "problem JSON file")->required();

    auto* find = app.add_subcommand("find-projection", "construct a norm-1 projection");
    find->add_option("--problem", problem_path, "problem JSON file")->required();
    find->add_option("--method", method, "auto | hilbert | supsource | c0 | search")
        ->capture_default_str();

    auto* minproj = app.add_subcommand("min-projection-norm",
                                       "minimal operator norm over projections onto a span");
    minproj->add_option("--problem", problem_path, "problem JSON file")->required();

    auto* retract = app.add_subcommand("retract", "build the holomorphic retraction for a ball map");
    retract->add_option("--problem", problem_path, "problem JSON file")->required();
    retract->add_option("--method", method, "projection method")->capture_default_str();

    app.add_subcommand("counterexample",
                       "the fixed finite-dimensional instance where property (V) fails");

    auto* demo = app.add_subcommand("corollary-demo",
                                    "full base-point pipeline on a polydisk pair");
    demo->add_option("--problem", problem_path, "optional problem JSON file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return carv::kInvalidInput;
    }

    try {
        carv::ScenarioResult result;
        if (metric->parsed()) {
            const json n = load_json(norm_path);
            const json v = load_json(vector_path);
            std::optional<json> base;
            if (!base_path.empty()) base = load_json(base_path);
            result = carv::run_metric(n, v, base ? &*base : nullptr, opt);
        } else if (check->parsed()) {
            result = carv::run_check_isometry(load_json(problem_path), opt);
        } else if (find->parsed()) {
            result = carv::run_find_projection(load_json(problem_path), method, opt);
        } else if (minproj->parsed()) {
            result = carv::run_min_projection_norm(load_json(problem_path), opt);
        } else if (retract->parsed()) {
            result = carv::run_retract(load_json(problem_path), method, opt);
        } else if (app.get_subcommand("counterexample")->parsed()) {
            result = carv::run_counterexample(opt);
        } else if (demo->parsed()) {
            std::optional<json> problem;
            if (!problem_path.empty()) problem = load_json(problem_path);
            result = carv::run_corollary_demo(problem ? &*problem : nullptr, opt);
        }
        emit(result, out_path, format);
        return result.exit_code;
    } catch (const carv::InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return carv::kInvalidInput;
    } catch (const carv::DimensionError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return carv::kInvalidInput;
    } catch (const carv::WrongNormKind& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return carv::kInvalidInput;
    } catch (const carv::RankDeficient& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return carv::kInvalidInput;
    } catch (const carv::DomainError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return carv::kInvalidInput;
    } catch (const carv::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return carv::kNumericalFailure;
    } catch (const carv::NotAnIsometry& e) {
        std::cerr << "refuted: " << e.what() << "\n";
        return carv::kRefuted;
    } catch (const carv::VanishingViolation& e) {
        std::cerr << "refuted: " << e.what() << "\n";
        return carv::kRefuted;
    } catch (const carv::LinearityViolation& e) {
        std::cerr << "refuted: " << e.what() << "\n";
        return carv::kRefuted;
    } catch (const carv::VerificationFailure& e) {
        std::cerr << "refuted: " << e.what() << "\n";
        return carv::kRefuted;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return carv::kNumericalFailure;
    }
}
