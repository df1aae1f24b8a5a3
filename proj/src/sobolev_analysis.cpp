#include "codedspline/sobolev_analysis.hpp"

#include <cmath>
#include <limits>

#include "codedspline/constants.hpp"
#include "codedspline/errors.hpp"

namespace codedspline {

namespace {

constexpr double kPi = 3.14159265358979323846;

double fd1(const std::function<double(double)>& f, double x) {
    const double h = kFiniteDiffStep;
    if (x - h < 0.0) return (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2 * h)) / (2.0 * h);
    if (x + h > 1.0) return (3.0 * f(x) - 4.0 * f(x - h) + f(x - 2 * h)) / (2.0 * h);
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

double fd2(const std::function<double(double)>& f, double x) {
    const double h = kFiniteDiffStep;
    if (x - h < 0.0)
        return (2.0 * f(x) - 5.0 * f(x + h) + 4.0 * f(x + 2 * h) - f(x + 3 * h)) / (h * h);
    if (x + h > 1.0)
        return (2.0 * f(x) - 5.0 * f(x - h) + 4.0 * f(x - 2 * h) - f(x - 3 * h)) / (h * h);
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

// Composite Simpson over [0,1] on the fixed grid.
template <typename F>
double simpson(const F& g) {
    const std::size_t n = kSimpsonPoints;  // odd
    const double h = 1.0 / static_cast<double>(n - 1);
    double acc = g(0.0) + g(1.0);
    for (std::size_t i = 1; i + 1 < n; ++i)
        acc += (i % 2 == 1 ? 4.0 : 2.0) * g(static_cast<double>(i) * h);
    return acc * h / 3.0;
}

}  // namespace

double FunctionHandle::d1(double x) const { return deriv1 ? deriv1(x) : fd1(eval, x); }

double FunctionHandle::d2(double x) const { return deriv2 ? deriv2(x) : fd2(eval, x); }

FunctionHandle from_spline(const SplineModel& model) {
    FunctionHandle f;
    f.eval = [model](double x) { return model.value(x); };
    f.deriv1 = [model](double x) { return model.deriv(x, 1); };
    f.deriv2 = [model](double x) { return model.deriv(x, 2); };
    return f;
}

double lp_norm(const FunctionHandle& f, double p, int deriv_order) {
    if (deriv_order < 0 || deriv_order > 2) throw Unsupported("derivative order must be 0, 1 or 2");
    auto g = [&](double x) {
        switch (deriv_order) {
            case 0: return f.eval(x);
            case 1: return f.d1(x);
            default: return f.d2(x);
        }
    };
    if (std::isinf(p)) {
        double sup = 0.0;
        const double h = 1.0 / static_cast<double>(kSimpsonPoints - 1);
        for (std::size_t i = 0; i < kSimpsonPoints; ++i)
            sup = std::max(sup, std::abs(g(static_cast<double>(i) * h)));
        return sup;
    }
    if (p == 1.0) return simpson([&](double x) { return std::abs(g(x)); });
    if (p == 2.0) {
        const double v = simpson([&](double x) {
            const double y = g(x);
            return y * y;
        });
        return std::sqrt(std::max(v, 0.0));
    }
    throw Unsupported("p must be 1, 2 or infinity");
}

double sobolev_eq_norm_sq(const FunctionHandle& f) {
    const double a0 = f.eval(0.0);
    const double a1 = f.d1(0.0);
    const double d2norm = lp_norm(f, 2.0, 2);
    return a0 * a0 + a1 * a1 + d2norm * d2norm;
}

NormEquivalenceReport check_norm_equivalence(const FunctionHandle& f) {
    const double n0 = lp_norm(f, 2.0, 0);
    const double n1 = lp_norm(f, 2.0, 1);
    const double n2 = lp_norm(f, 2.0, 2);
    const double full_sq = n0 * n0 + n1 * n1 + n2 * n2;
    const double eq_sq = sobolev_eq_norm_sq(f);
    NormEquivalenceReport rep;
    rep.ratio = full_sq / eq_sq;
    rep.ratio_low = 0.2 - 1e-3;
    rep.ratio_high = 7.0 + 1e-3;
    rep.pass = rep.ratio >= rep.ratio_low && rep.ratio <= rep.ratio_high;
    return rep;
}

double kernel_silverman(double u) {
    const double a = std::abs(u) / std::sqrt(2.0);
    return 0.5 * std::exp(-a) * std::sin(a + kPi / 4.0);
}

namespace {
double kernel_phi(double u, double v) {
    return std::exp(-u) * (std::cos(u) - std::sin(u) + 2.0 * std::cos(v));
}
}  // namespace

double kernel_K(double x, double t, double lambda) {
    if (!(lambda > 0.0 && lambda <= 1.0)) throw InvalidLambda("lambda must be in (0, 1]");
    const double b = std::sqrt(2.0) * std::pow(lambda, 0.25);
    const double d = x - t;
    const double interior =
        std::exp(-std::abs(d) / b) * (std::sin(std::abs(d) / b) + std::cos(d / b));
    const double boundary = kernel_phi((x + t) / b, d / b) +
                            kernel_phi((2.0 - x - t) / b, (t - x) / b);
    return (interior + boundary) / (2.0 * b);
}

WeightConvergenceReport check_kernel_weight_convergence(
    const std::function<double(std::size_t)>& lambda_rule,
    const std::vector<std::size_t>& n_list) {
    WeightConvergenceReport rep;
    for (const std::size_t n : n_list) {
        const double lambda = lambda_rule(n);
        if (!(static_cast<double>(n) * std::pow(lambda, 0.25) > kBandwidthC0))
            throw BandwidthTooNarrow("n * lambda^{1/4} must exceed C0");
        std::vector<double> t(n);
        for (std::size_t i = 0; i < n; ++i)
            t[i] = static_cast<double>(i + 1) / static_cast<double>(n);
        SmoothingSolver solver(t, lambda);
        std::vector<double> e(n, 0.0);
        double sup = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            e[i] = 1.0;
            const SplineModel w = solver.fit(e);
            e[i] = 0.0;
            for (std::size_t k = 0; k < kSupGridPoints; ++k) {
                const double x =
                    static_cast<double>(k) / static_cast<double>(kSupGridPoints - 1);
                const double g = static_cast<double>(n) * w.value(x);
                sup = std::max(sup, std::abs(g - kernel_K(x, t[i], lambda)));
            }
        }
        rep.n_values.push_back(n);
        rep.sup_diffs.push_back(sup);
    }
    rep.pass = true;
    for (std::size_t i = 0; i + 1 < rep.sup_diffs.size(); ++i)
        if (!(rep.sup_diffs[i + 1] < rep.sup_diffs[i])) rep.pass = false;
    return rep;
}

InterpolationInequalityReport check_interpolation_inequality(const FunctionHandle& f) {
    InterpolationInequalityReport rep;
    const double n2 = lp_norm(f, 2.0, 0);
    const double n2p = lp_norm(f, 2.0, 1);
    rep.lhs = lp_norm(f, std::numeric_limits<double>::infinity(), 0);
    rep.rhs = 2.0 * std::sqrt(n2 * n2p);
    if (n2 == 0.0 && n2p == 0.0) {  // zero function: 0 <= 0
        rep.hypothesis_met = true;
        rep.pass = rep.lhs <= rep.rhs + 1e-6;
        return rep;
    }
    rep.hypothesis_met = n2p > 0.0 && n2 / n2p < 1.0;
    rep.pass = !rep.hypothesis_met || rep.lhs <= rep.rhs + 1e-6;
    return rep;
}

}  // namespace codedspline
