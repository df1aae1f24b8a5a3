#pragma once

#include <vector>

#include <Eigen/Dense>

namespace codedspline::oracle {

// Reference implementation of the smoothing spline via the dense
// reproducing-kernel construction: P_ij = zeta_j(t_i) with basis {1, t},
// Sigma_ij = phi0(t_i, t_j), L = Sigma + n*lambda*I,
//   d = (P^T L^-1 P)^-1 P^T L^-1 y,
//   c = L^-1 (I - P (P^T L^-1 P)^-1 P^T L^-1) y.
// Used only to validate the banded production solver.

// Kernel of the zero-boundary second-order Sobolev space on [0,1]:
// phi0(t,s) = int_0^1 (t-x)_+ (s-x)_+ dx = min^2 max / 2 - min^3 / 6.
double phi0(double t, double s);
double phi0_dx(double x, double s);   // d/dx phi0(x, s)
double phi0_dxx(double x, double s);  // d^2/dx^2 phi0(x, s)

struct DenseFit {
    std::vector<double> knots;
    Eigen::VectorXd coef_kernel;  // c
    Eigen::Vector2d coef_poly;    // d
    double lambda = 0.0;
};

DenseFit dense_fit(const std::vector<double>& points, const std::vector<double>& values,
                   double lambda);

double dense_evaluate(const DenseFit& f, double x, int order = 0);

// Fitted values at the knots, column by column: A_lambda as P d + Sigma c.
Eigen::MatrixXd dense_hat_matrix(const std::vector<double>& points, double lambda);

// Same operator through the augmented form Q (Q^T Q + n*lambda*Gamma)^-1 Q^T
// with Q = [P Sigma] and Gamma = blockdiag(0, Sigma); an independent
// algebraic route to the same matrix.
Eigen::MatrixXd dense_hat_matrix_qform(const std::vector<double>& points, double lambda);

}  // namespace codedspline::oracle
