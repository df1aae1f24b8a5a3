#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "codedspline/adversary.hpp"
#include "codedspline/codec.hpp"

namespace codedspline {

// A computation task f: R^d -> [-M, M]^m with its sampling box; eval clamps
// its output to the bound.
struct ComputeFunction {
    std::string id;
    std::size_t dim_in = 1, dim_out = 1;
    double bound = 1.0;  // M
    std::vector<double> box_lo, box_hi;
    std::function<std::vector<double>(const std::vector<double>&)> eval;
    std::optional<double> lipschitz_hint;   // nu
    std::optional<double> curvature_hint;   // eta
};

// Built-in functions: xsinx, identity, cubic, mlp_small.
const ComputeFunction& registry_get(const std::string& id);

// Loads a fixed-weight MLP from the JSON schema
// {"layers":[{"w":[[...]],"b":[...],"act":"tanh"|"linear"}],"d":..,"m":..,"M":..}.
ComputeFunction mlp_from_json_text(const std::string& text, const std::string& id = "mlp");
ComputeFunction mlp_from_json_file(const std::string& path, const std::string& id = "mlp");

struct PipelineResult {
    std::vector<std::vector<double>> estimates;  // K x m, in the order of task.inputs
    std::vector<double> per_point_sq_error;      // K
    double avg_error = 0.0;
    struct Meta {
        std::size_t num_workers = 0, num_inputs = 0, gamma = 0;
        double lambda_d = 0.0;
        Strategy strategy = Strategy::None;
        std::uint64_t seed = 0;
    } meta;
};

// encode -> compute -> corrupt -> decode -> compare against ground truth.
// Inputs are assigned to the encoder points in lexicographically sorted
// order (the assignment minimizes the encoder's roughness); estimates are
// returned in the original input order.
PipelineResult run_pipeline(const CodedTask& task, const ComputeFunction& f,
                            const AttackPlan& plan, double lambda_d, double lambda_e);

struct RepeatedResult {
    std::vector<PipelineResult> runs;  // ordered by repetition index
    double mean_error = 0.0;
    std::optional<double> stddev;  // absent when repetitions == 1
};

// Repetitions draw fresh inputs uniformly from the function's box with
// per-repetition seeds derived from (master_seed, repetition index); runs in
// parallel up to the CODEDSPLINE_THREADS cap.
RepeatedResult run_repeated(const ComputeFunction& f, std::size_t num_inputs,
                            std::size_t num_workers, const AttackPlan& plan_template,
                            double lambda_d, double lambda_e, std::size_t repetitions,
                            std::uint64_t master_seed);

std::size_t thread_cap();

}  // namespace codedspline
