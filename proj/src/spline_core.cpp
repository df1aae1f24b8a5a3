#include "codedspline/spline_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "codedspline/errors.hpp"

namespace codedspline {

double RegressionData::delta_max() const {
    // boundary gaps count, with (t_0, t_{n+1}) := (0, 1)
    double dmax = points.front() - 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        dmax = std::max(dmax, points[i + 1] - points[i]);
    return std::max(dmax, 1.0 - points.back());
}

double RegressionData::delta_min() const {
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        dmin = std::min(dmin, points[i + 1] - points[i]);
    return dmin;
}

void validate_data(const RegressionData& data, std::size_t min_points) {
    if (data.points.size() != data.values.size())
        throw InvalidAbscissae("points/values length mismatch");
    if (data.points.size() < min_points)
        throw TooFewPoints("need at least " + std::to_string(min_points) + " points, got " +
                           std::to_string(data.points.size()));
    for (std::size_t i = 0; i < data.points.size(); ++i) {
        if (!(data.points[i] >= 0.0 && data.points[i] <= 1.0))
            throw InvalidAbscissae("abscissa outside [0,1]");
        if (i > 0 && !(data.points[i] > data.points[i - 1]))
            throw InvalidAbscissae("abscissae not strictly increasing");
    }
}

namespace {

// Natural-cubic piecewise evaluation from (knots, values, second derivatives).
double eval_piecewise(const std::vector<double>& t, const std::vector<double>& g,
                      const std::vector<double>& gam, double x, int order) {
    const std::size_t n = t.size();
    if (x <= t.front() || x >= t.back()) {
        const bool left = x <= t.front();
        const std::size_t a = left ? 0 : n - 2;
        const double h = t[a + 1] - t[a];
        // one-sided slope at the boundary knot
        const double slope = left
            ? (g[1] - g[0]) / h - h / 6.0 * (2.0 * gam[0] + gam[1])
            : (g[n - 1] - g[n - 2]) / h + h / 6.0 * (2.0 * gam[n - 1] + gam[n - 2]);
        const double x0 = left ? t.front() : t.back();
        const double g0 = left ? g.front() : g.back();
        if (x == x0 && order == 2) return left ? gam.front() : gam.back();
        switch (order) {
            case 0: return g0 + slope * (x - x0);
            case 1: return slope;
            default: return 0.0;
        }
    }
    const std::size_t i =
        static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), x) - t.begin()) - 1;
    const double h = t[i + 1] - t[i];
    const double A = t[i + 1] - x;
    const double B = x - t[i];
    switch (order) {
        case 0:
            return (gam[i] * A * A * A + gam[i + 1] * B * B * B) / (6.0 * h) +
                   (g[i] / h - gam[i] * h / 6.0) * A + (g[i + 1] / h - gam[i + 1] * h / 6.0) * B;
        case 1:
            return (-gam[i] * A * A + gam[i + 1] * B * B) / (2.0 * h) -
                   (g[i] / h - gam[i] * h / 6.0) + (g[i + 1] / h - gam[i + 1] * h / 6.0);
        default:
            return (gam[i] * A + gam[i + 1] * B) / h;
    }
}

}  // namespace

SplineModel::SplineModel(std::vector<double> knots, std::vector<double> values,
                         std::vector<double> second_derivs, double lambda)
    : knots_(std::move(knots)),
      values_(std::move(values)),
      second_derivs_(std::move(second_derivs)),
      lambda_(lambda) {
    const std::size_t n = knots_.size();
    // c_j is the jump of the third derivative at knot j; outside the knot
    // range the extension is linear, so the boundary jumps use 0 outside.
    coef_kernel_.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double right =
            (j + 1 < n) ? (second_derivs_[j + 1] - second_derivs_[j]) / (knots_[j + 1] - knots_[j])
                        : 0.0;
        const double left =
            (j > 0) ? (second_derivs_[j] - second_derivs_[j - 1]) / (knots_[j] - knots_[j - 1])
                    : 0.0;
        coef_kernel_[j] = right - left;
    }
    // In the kernel representation u = d1 + d2 x + sum c_j phi0(x, t_j) the
    // kernel sum vanishes identically left of the first knot, so (d1, d2)
    // is the left linear extension evaluated at 0.
    const double slope0 = eval_piecewise(knots_, values_, second_derivs_, knots_.front(), 1);
    coef_poly_ = {values_.front() - slope0 * knots_.front(), slope0};
}

double SplineModel::value(double x) const {
    return eval_piecewise(knots_, values_, second_derivs_, x, 0);
}

double SplineModel::deriv(double x, int order) const {
    return eval_piecewise(knots_, values_, second_derivs_, x, order);
}

SmoothingSolver::SmoothingSolver(std::vector<double> points, double lambda)
    : points_(std::move(points)), lambda_(lambda) {
    RegressionData probe{points_, std::vector<double>(points_.size(), 0.0)};
    validate_data(probe, 3);
    if (!(lambda > 0.0)) throw InvalidLambda("lambda must be positive");
    const std::size_t n = points_.size();
    const std::size_t m = n - 2;
    h_.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h_[i] = points_[i + 1] - points_[i];

    // B = R + n*lambda*Q^T Q, pentadiagonal SPD. Column j of Q (n x m) has
    // entries 1/h_j, -(1/h_j + 1/h_{j+1}), 1/h_{j+1} in rows j, j+1, j+2.
    std::vector<double> diag(m), off1(m > 1 ? m - 1 : 0), off2(m > 2 ? m - 2 : 0);
    const double nl = static_cast<double>(n) * lambda;
    for (std::size_t j = 0; j < m; ++j) {
        const double a = 1.0 / h_[j];
        const double b = -(1.0 / h_[j] + 1.0 / h_[j + 1]);
        const double c = 1.0 / h_[j + 1];
        diag[j] = (h_[j] + h_[j + 1]) / 3.0 + nl * (a * a + b * b + c * c);
        if (j + 1 < m) {
            const double a1 = 1.0 / h_[j + 1];
            const double b1 = -(1.0 / h_[j + 1] + 1.0 / h_[j + 2]);
            off1[j] = h_[j + 1] / 6.0 + nl * (b * a1 + c * b1);
        }
        if (j + 2 < m) off2[j] = nl * (c * (1.0 / h_[j + 2]));
    }

    // LDL^T, bandwidth 2
    fac_d_.assign(m, 0.0);
    fac_l1_.assign(m > 1 ? m - 1 : 0, 0.0);
    fac_l2_.assign(m > 2 ? m - 2 : 0, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        double dj = diag[j];
        if (j >= 1) dj -= fac_l1_[j - 1] * fac_l1_[j - 1] * fac_d_[j - 1];
        if (j >= 2) dj -= fac_l2_[j - 2] * fac_l2_[j - 2] * fac_d_[j - 2];
        if (!(dj > 0.0) || !std::isfinite(dj))
            throw NumericalFailure("penalized system not positive definite");
        fac_d_[j] = dj;
        if (j + 1 < m) {
            double v = off1[j];
            if (j >= 1) v -= fac_l2_[j - 1] * fac_l1_[j - 1] * fac_d_[j - 1];
            fac_l1_[j] = v / dj;
        }
        if (j + 2 < m) fac_l2_[j] = off2[j] / dj;
    }
}

SplineModel SmoothingSolver::fit(const std::vector<double>& values) const {
    const std::size_t n = points_.size();
    const std::size_t m = n - 2;
    if (values.size() != n) throw InvalidAbscissae("values length mismatch");

    // rhs = Q^T y
    std::vector<double> z(m);
    for (std::size_t j = 0; j < m; ++j)
        z[j] = values[j] / h_[j] - values[j + 1] * (1.0 / h_[j] + 1.0 / h_[j + 1]) +
               values[j + 2] / h_[j + 1];

    // solve L D L^T gamma = z
    for (std::size_t j = 0; j < m; ++j) {
        if (j >= 1) z[j] -= fac_l1_[j - 1] * z[j - 1];
        if (j >= 2) z[j] -= fac_l2_[j - 2] * z[j - 2];
    }
    for (std::size_t j = 0; j < m; ++j) z[j] /= fac_d_[j];
    for (std::size_t jj = m; jj-- > 0;) {
        if (jj + 1 < m) z[jj] -= fac_l1_[jj] * z[jj + 1];
        if (jj + 2 < m) z[jj] -= fac_l2_[jj] * z[jj + 2];
    }

    // fitted values g = y - n*lambda*Q*gamma
    const double nl = static_cast<double>(n) * lambda_;
    std::vector<double> g = values;
    for (std::size_t j = 0; j < m; ++j) {
        g[j] -= nl * z[j] / h_[j];
        g[j + 1] -= nl * z[j] * (-(1.0 / h_[j] + 1.0 / h_[j + 1]));
        g[j + 2] -= nl * z[j] / h_[j + 1];
    }
    std::vector<double> gamma(n, 0.0);
    for (std::size_t j = 0; j < m; ++j) gamma[j + 1] = z[j];
    return SplineModel(points_, std::move(g), std::move(gamma), lambda_);
}

SplineModel fit(const RegressionData& data, double lambda) {
    validate_data(data, 3);
    SmoothingSolver solver(data.points, lambda);
    return solver.fit(data.values);
}

SplineModel natural_interpolant(const RegressionData& data) {
    validate_data(data, 2);
    const std::size_t n = data.size();
    if (n == 2) return SplineModel(data.points, data.values, {0.0, 0.0}, 0.0);

    // tridiagonal R gamma = Q^T y
    const std::size_t m = n - 2;
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = data.points[i + 1] - data.points[i];
    std::vector<double> diag(m), off(m > 1 ? m - 1 : 0), rhs(m);
    for (std::size_t j = 0; j < m; ++j) {
        diag[j] = (h[j] + h[j + 1]) / 3.0;
        if (j + 1 < m) off[j] = h[j + 1] / 6.0;
        rhs[j] = data.values[j] / h[j] -
                 data.values[j + 1] * (1.0 / h[j] + 1.0 / h[j + 1]) + data.values[j + 2] / h[j + 1];
    }
    // symmetric tridiagonal LDL^T
    std::vector<double> d(m), l(m > 1 ? m - 1 : 0);
    for (std::size_t j = 0; j < m; ++j) {
        double dj = diag[j];
        if (j >= 1) dj -= l[j - 1] * l[j - 1] * d[j - 1];
        if (!(dj > 0.0)) throw NumericalFailure("interpolation system not positive definite");
        d[j] = dj;
        if (j + 1 < m) l[j] = off[j] / dj;
    }
    for (std::size_t j = 1; j < m; ++j) rhs[j] -= l[j - 1] * rhs[j - 1];
    for (std::size_t j = 0; j < m; ++j) rhs[j] /= d[j];
    for (std::size_t jj = m - 1; jj-- > 0;) rhs[jj] -= l[jj] * rhs[jj + 1];

    std::vector<double> gamma(n, 0.0);
    for (std::size_t j = 0; j < m; ++j) gamma[j + 1] = rhs[j];
    return SplineModel(data.points, data.values, std::move(gamma), 0.0);
}

namespace {
void check_domain(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw OutOfDomain("x outside [0,1]");
}
}  // namespace

double evaluate(const SplineModel& model, double x) {
    check_domain(x);
    return model.value(x);
}

double derivative(const SplineModel& model, double x, int order) {
    check_domain(x);
    if (order != 1 && order != 2) throw Unsupported("derivative order must be 1 or 2");
    return model.deriv(x, order);
}

HatMatrix hat_matrix(const std::vector<double>& points, double lambda) {
    SmoothingSolver solver(points, lambda);
    const std::size_t n = points.size();
    HatMatrix A;
    A.n = n;
    A.entries.assign(n * n, 0.0);
    std::vector<double> e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        const SplineModel col = solver.fit(e);
        for (std::size_t i = 0; i < n; ++i) A.entries[i * n + j] = col.knot_values()[i];
        e[j] = 0.0;
    }
    return A;
}

double weight_function(const std::vector<double>& points, double lambda, double x,
                       std::size_t i) {
    check_domain(x);
    const std::size_t n = points.size();
    if (i >= n) throw OutOfDomain("weight index out of range");
    SmoothingSolver solver(points, lambda);
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    return static_cast<double>(n) * solver.fit(e).value(x);
}

double objective(const RegressionData& data, double lambda, const SplineModel& g) {
    const std::size_t n = data.size();
    double mse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = g.value(data.points[i]) - data.values[i];
        mse += r * r;
    }
    mse /= static_cast<double>(n);
    // int g''^2 over the knot span: g'' is piecewise linear between knots and
    // zero outside, so each interval contributes h/3 (a^2 + a b + b^2).
    const auto& t = g.knots();
    const auto& gam = g.second_derivs();
    double pen = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double h = t[i + 1] - t[i];
        pen += h / 3.0 * (gam[i] * gam[i] + gam[i] * gam[i + 1] + gam[i + 1] * gam[i + 1]);
    }
    return mse + lambda * pen;
}

}  // namespace codedspline
