#pragma once

#include <cstddef>
#include <vector>

#include "codedspline/spline_core.hpp"

namespace codedspline {

// One coded-computation instance: K inputs in R^d paired with encoder points
// alpha, N decoder points beta (default i/N), and the output bound M.
struct CodedTask {
    std::vector<std::vector<double>> inputs;  // K x d
    std::vector<double> alpha;                // K, strictly increasing in (0,1)
    std::vector<double> beta;                 // N, strictly increasing in (0,1]
    double bound = 0.0;                       // M
    std::size_t dim_in = 0;                   // d
    std::size_t dim_out = 0;                  // m

    std::size_t num_inputs() const { return alpha.size(); }    // K
    std::size_t num_workers() const { return beta.size(); }    // N
};

// Builds a task with the default point layouts alpha_k = k/(K+1) and
// beta_i = i/N, validating all invariants.
CodedTask make_task(std::vector<std::vector<double>> inputs, double bound,
                    std::size_t dim_out, std::size_t num_workers);

void validate_task(const CodedTask& task);

// One spline per input coordinate, sharing knots and lambda.
struct VectorSpline {
    std::vector<SplineModel> components;
};

// Per-dimension smoothing spline through (alpha_k, x_k[dim]); lambda_e = 0
// gives the natural interpolating spline (the default encoder).
VectorSpline design_encoder(const CodedTask& task, double lambda_e);

// Coded inputs x~_n = u_e(beta_n).
std::vector<std::vector<double>> encode(const VectorSpline& encoder,
                                        const std::vector<double>& beta);

// lambda_d = clamp(J * N^{(8/5)(a-1)}, C_lambda * N^-4 * (1+1e-9), 1).
double choose_lambda_d(std::size_t num_workers, double a, double j_const, double c_lambda);

enum class RangePolicy { Clamp, Reject };

// Per-component smoothing-spline fit of the worker responses at beta with
// smoothing lambda_d, evaluated at the alpha points.
std::vector<std::vector<double>> decode(const std::vector<double>& beta,
                                        const std::vector<std::vector<double>>& responses,
                                        double lambda_d, const std::vector<double>& alpha,
                                        double bound, RangePolicy policy = RangePolicy::Clamp);

}  // namespace codedspline
