#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "codedspline/adversary.hpp"

namespace codedspline {

struct GammaRule {
    enum class Kind { Power, Fixed } kind = Kind::Power;
    double exponent = 0.5;   // gamma = floor(N^a), a in [0,1)
    std::size_t fixed = 0;   // gamma = fixed

    std::size_t gamma_for(std::size_t n) const;
    double lambda_exponent() const;  // the a fed into the lambda_d rule (0 when fixed)
};

struct ExperimentConfig {
    std::string function_id;
    std::size_t num_inputs = 0;  // K
    std::vector<std::size_t> n_list;
    GammaRule gamma_rule;
    double j_const = 1.0;
    double c_lambda = 1.0;
    double lambda_e = 0.0;
    Strategy strategy = Strategy::ClusterMax;
    std::size_t repetitions = 20;
    std::uint64_t master_seed = 0;
    std::string output_path;
};

ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);
std::string canonical_config(const ExperimentConfig& cfg);

struct SweepRow {
    std::size_t n = 0;
    std::size_t gamma = 0;
    double lambda_d = 0.0;
    double mean_error = 0.0;
    std::optional<double> stddev;
    std::size_t repetitions = 0;
    std::uint64_t seed = 0;
};

std::string csv_header();
std::string csv_line(const SweepRow& row);
std::vector<SweepRow> parse_csv(const std::string& path);

// One row per N; rows are appended to *csv as they complete when csv is
// non-null (header first).
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, std::ostream* csv = nullptr);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Ordinary least squares of ln(mean_error) on ln(N).
SlopeFit fit_slope(const std::vector<SweepRow>& rows);

// Log-log table plus the fitted line, for external plotting.
void write_loglog_csv(const std::vector<SweepRow>& rows, const SlopeFit& fit, std::ostream& os);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Named property suites: "splines", "kernels", "norms", "impossibility".
std::vector<CheckResult> validate(const std::string& suite);

// Worst relative deviation between the banded fit and the dense oracle over
// `count` random instances with n <= 50 and lambda in [1e-6, 1].
double oracle_equivalence_worst_error(std::size_t count, std::uint64_t seed);

}  // namespace codedspline
