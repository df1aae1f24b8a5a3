#pragma once

#include <cstddef>
#include <vector>

namespace codedspline {

// Regression sample on the fixed domain [0,1]: strictly increasing abscissae
// and one ordinate per point.
struct RegressionData {
    std::vector<double> points;
    std::vector<double> values;

    std::size_t size() const { return points.size(); }
    double delta_max() const;
    double delta_min() const;
};

// Throws InvalidAbscissae / TooFewPoints when the sample cannot be fitted.
// min_points is 2 for interpolation, 3 for smoothing.
void validate_data(const RegressionData& data, std::size_t min_points);

// Fitted second-order smoothing spline in natural-cubic form: values and
// second derivatives at the knots determine the piecewise cubic everywhere,
// with linear extension beyond the first/last knot. The equivalent
// kernel-representation coefficients (coef_kernel, coef_poly) are kept
// alongside; coef_poly spans the penalty null space {1, t}.
class SplineModel {
  public:
    SplineModel() = default;
    SplineModel(std::vector<double> knots, std::vector<double> values,
                std::vector<double> second_derivs, double lambda);

    double value(double x) const;
    double deriv(double x, int order) const;  // order 1 or 2, analytic

    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& knot_values() const { return values_; }
    const std::vector<double>& second_derivs() const { return second_derivs_; }
    const std::vector<double>& coef_kernel() const { return coef_kernel_; }
    const std::vector<double>& coef_poly() const { return coef_poly_; }
    double lambda() const { return lambda_; }
    static constexpr int order() { return 2; }

  private:
    std::vector<double> knots_, values_, second_derivs_;
    std::vector<double> coef_kernel_;  // c, one per knot (third-derivative jumps)
    std::vector<double> coef_poly_;    // d = (u(0), u'(0)) of the linear extension
    double lambda_ = 0.0;
};

// Penalized normal equations for a fixed set of knots and smoothing
// parameter, factored once so that many right-hand sides can be fitted
// cheaply (hat matrix columns, weight functions).
class SmoothingSolver {
  public:
    SmoothingSolver(std::vector<double> points, double lambda);
    SplineModel fit(const std::vector<double>& values) const;
    std::size_t size() const { return points_.size(); }

  private:
    std::vector<double> points_;
    double lambda_;
    // pentadiagonal LDL^T factors of R + n*lambda*Q^T Q
    std::vector<double> fac_d_, fac_l1_, fac_l2_;
    std::vector<double> h_;  // knot spacings
};

// Minimizer of (1/n) sum (g(t_i)-y_i)^2 + lambda * int g''^2 over the
// second-order Sobolev space on [0,1]. Requires lambda > 0 and n >= 3.
SplineModel fit(const RegressionData& data, double lambda);

// Natural cubic spline through the data (the lambda -> 0 limit); accepts
// n >= 2, where n = 2 yields the straight line.
SplineModel natural_interpolant(const RegressionData& data);

// Evaluation and analytic differentiation on [0,1]; x outside the knot range
// but inside [0,1] uses the natural linear extension.
double evaluate(const SplineModel& model, double x);
double derivative(const SplineModel& model, double x, int order);

// Hat matrix A_lambda: fitted values at the knots as a linear map of the
// data values.
struct HatMatrix {
    std::size_t n = 0;
    std::vector<double> entries;  // row-major n x n
    double operator()(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
};

HatMatrix hat_matrix(const std::vector<double>& points, double lambda);

// Discrete equivalent-kernel weight G_{n,lambda}(x, t_i): n times the value
// at x of the spline fitted to the i-th unit vector.
double weight_function(const std::vector<double>& points, double lambda, double x,
                       std::size_t i);

// Penalized objective (1/n) sum (g(t_i)-y_i)^2 + lambda * int g''^2 of an
// arbitrary natural cubic spline g against the data; int g''^2 is exact
// (gamma^T R gamma).
double objective(const RegressionData& data, double lambda, const SplineModel& g);

}  // namespace codedspline
