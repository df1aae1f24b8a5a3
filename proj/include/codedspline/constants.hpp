#pragma once

#include <cstddef>

namespace codedspline {

// All numerical tolerances and fixed discretization choices live here.

// Relative tolerance for solver-to-solver comparisons (banded vs dense).
inline constexpr double kSolverRelTol = 1e-8;

// Central finite-difference step used when a FunctionHandle lacks analytic
// derivatives.
inline constexpr double kFiniteDiffStep = 1e-5;

// Composite-Simpson grid size for all norm integrals (must be odd).
inline constexpr std::size_t kSimpsonPoints = 4097;

// Grid used for sup-norm scans over [0,1] (kernel bounds, weight-function
// comparisons).
inline constexpr std::size_t kSupGridPoints = 201;

// C0 in the bandwidth precondition n * lambda^{1/4} > C0 of the
// weight-function convergence check.
inline constexpr double kBandwidthC0 = 1.0;

// Defaults for the lambda_d selection rule.
inline constexpr double kDefaultJ = 1.0;
inline constexpr double kDefaultCLambda = 1.0;

}  // namespace codedspline
