#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "codedspline/spline_core.hpp"

namespace codedspline {

// Scalar function on [0,1] with optional analytic derivatives; norm
// operations fall back to central finite differences (step kFiniteDiffStep,
// one-sided at the endpoints) when a derivative is absent.
struct FunctionHandle {
    std::function<double(double)> eval;
    std::function<double(double)> deriv1;  // may be empty
    std::function<double(double)> deriv2;  // may be empty

    double d1(double x) const;
    double d2(double x) const;
};

FunctionHandle from_spline(const SplineModel& model);

// L^p norm of the deriv_order-th derivative over [0,1]; p in {1, 2, inf},
// composite Simpson on a kSimpsonPoints grid (grid max for p = inf).
double lp_norm(const FunctionHandle& f, double p, int deriv_order);

// Equivalent squared Sobolev norm f(0)^2 + f'(0)^2 + ||f''||_2^2.
double sobolev_eq_norm_sq(const FunctionHandle& f);

struct NormEquivalenceReport {
    double ratio = 0.0;       // full squared Sobolev norm over equivalent norm
    double ratio_low = 0.0;   // admissible lower bound (1/5 minus slack)
    double ratio_high = 0.0;  // admissible upper bound (7 plus slack)
    bool pass = false;
};

NormEquivalenceReport check_norm_equivalence(const FunctionHandle& f);

// Silverman's asymptotic spline kernel.
double kernel_silverman(double u);

// Equivalent kernel with both boundary-correction terms, valid for
// 0 < lambda <= 1 and x, t in [0,1].
double kernel_K(double x, double t, double lambda);

struct WeightConvergenceReport {
    std::vector<std::size_t> n_values;
    std::vector<double> sup_diffs;  // sup over grid of |G_{n,lambda} - K_lambda|
    bool pass = false;              // strictly decreasing along n_values
};

// Compares the discrete weight function on equidistant points i/n against
// the closed-form kernel for each n in n_list, lambda = lambda_rule(n).
WeightConvergenceReport check_kernel_weight_convergence(
    const std::function<double(std::size_t)>& lambda_rule,
    const std::vector<std::size_t>& n_list);

struct InterpolationInequalityReport {
    bool hypothesis_met = false;  // ||f||_2 / ||f'||_2 < 1
    double lhs = 0.0;             // ||f||_inf
    double rhs = 0.0;             // 2 sqrt(||f||_2 ||f'||_2)
    bool pass = false;            // vacuously true when the hypothesis fails
};

InterpolationInequalityReport check_interpolation_inequality(const FunctionHandle& f);

}  // namespace codedspline
