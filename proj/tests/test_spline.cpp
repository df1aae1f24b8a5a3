#include <doctest.h>

#include <cmath>
#include <vector>

#include "codedspline/dense_oracle.hpp"
#include "codedspline/errors.hpp"
#include "codedspline/rng.hpp"
#include "codedspline/spline_core.hpp"

using namespace codedspline;

namespace {

// n = 7 fixture; expected values computed independently from the dense
// reproducing-kernel formulas (P, Sigma, L = Sigma + n*lambda*I) in numpy
// and frozen here.
const std::vector<double> kT7 = {
    0.11041025397214355, 0.44132330216197024, 0.68947330789698935, 0.75069411391073881,
    0.76299780661372485, 0.84425400311492715, 0.95659745757128567};
const std::vector<double> kY7 = {
    -0.31624259234358221, -0.016801157504288795, -0.85304392757358005, 0.87939797486282856,
    0.77779193542894831, 0.066030697561216045, 1.1272412069680329};
constexpr double kLambda7 = 0.01;
const std::vector<double> kC7 = {
    2.2111374735532801, 0.91159048323071834, -15.93866918237419, 7.4318671038757129,
    5.6972364079628566, -6.3767049835113072, 6.0635426972629283};
const std::vector<double> kD7 = {-0.5968281821999486, 1.1394409684029683};
constexpr double kEval037 = -0.16878847775464934;
constexpr double kDeriv1_037 = 1.2139417478233041;
constexpr double kDeriv2_037 = 0.57398861519237476;

// n = 5 hat matrix at lambda = 0.1, same numpy dense route.
const std::vector<double> kT5 = {0.05, 0.3, 0.5, 0.7, 0.95};
const double kA5[5][5] = {
    {0.62526204695469767, 0.38115323713431182, 0.1927192776595964, 0.011163514626603751,
     -0.21029807637520978},
    {0.38115323713431176, 0.28584967879670231, 0.20350701500333643, 0.11832655443904563,
     0.011163514626603706},
    {0.19271927765959623, 0.20350701500333632, 0.20754741467413471, 0.20350701500333632,
     0.19271927765959629},
    {0.011163514626603734, 0.11832655443904561, 0.20350701500333646, 0.28584967879670231,
     0.38115323713431182},
    {-0.2102980763752097, 0.011163514626603727, 0.19271927765959643, 0.38115323713431182,
     0.62526204695469767}};

std::vector<double> linspace01(std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

RegressionData line_data(std::size_t n, double a, double b) {
    RegressionData d;
    d.points.resize(n);
    d.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        d.points[i] = 0.04 + 0.92 * static_cast<double>(i) / static_cast<double>(n - 1);
        d.values[i] = a * d.points[i] + b;
    }
    return d;
}

}  // namespace

TEST_CASE("fit reproduces linear data exactly") {
    const RegressionData d = line_data(8, 2.0, 1.0);
    const SplineModel m = fit(d, 0.5);
    for (const double x : linspace01(101))
        CHECK(std::abs(m.value(x) - (2.0 * x + 1.0)) <= 1e-9);
}

TEST_CASE("huge lambda collapses to the least-squares line") {
    Rng rng(12);
    RegressionData d;
    d.points = linspace01(10);
    d.points.front() = 0.013;  // keep strictly inside, irregular spacing
    for (std::size_t i = 0; i < 10; ++i) d.values.push_back(rng.uniform(-1.0, 1.0));
    // OLS line through the data
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < 10; ++i) {
        sx += d.points[i];
        sy += d.values[i];
        sxx += d.points[i] * d.points[i];
        sxy += d.points[i] * d.values[i];
    }
    const double slope = (10 * sxy - sx * sy) / (10 * sxx - sx * sx);
    const double icept = (sy - slope * sx) / 10;
    const SplineModel m = fit(d, 1e9);
    double worst = 0.0;
    for (const double x : linspace01(51))
        worst = std::max(worst, std::abs(m.value(x) - (slope * x + icept)));
    CHECK(worst <= 1e-4);
}

TEST_CASE("fit matches the frozen dense-oracle coefficients") {
    const SplineModel m = fit({kT7, kY7}, kLambda7);
    for (std::size_t i = 0; i < 7; ++i)
        CHECK(std::abs(m.coef_kernel()[i] - kC7[i]) <= 1e-8 * std::abs(kC7[i]));
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(std::abs(m.coef_poly()[i] - kD7[i]) <= 1e-8 * std::abs(kD7[i]));

    // and against the in-process dense oracle
    const auto dense = oracle::dense_fit(kT7, kY7, kLambda7);
    for (std::size_t i = 0; i < 7; ++i)
        CHECK(m.coef_kernel()[i] ==
              doctest::Approx(dense.coef_kernel[static_cast<Eigen::Index>(i)]).epsilon(1e-10));
}

TEST_CASE("evaluate: interpolation limit at a peak") {
    const RegressionData d{{0.0, 0.5, 1.0}, {0.0, 1.0, 0.0}};
    const SplineModel m = fit(d, 1e-12);
    CHECK(evaluate(m, 0.5) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("evaluate: constants are reproduced everywhere") {
    RegressionData d;
    d.points = {0.1, 0.35, 0.52, 0.8};
    d.values = {3.25, 3.25, 3.25, 3.25};
    const SplineModel m = fit(d, 0.07);
    for (const double x : linspace01(37)) CHECK(evaluate(m, x) == doctest::Approx(3.25));
}

TEST_CASE("evaluate and derivative match the frozen fixture at 0.37") {
    const SplineModel m = fit({kT7, kY7}, kLambda7);
    CHECK(std::abs(evaluate(m, 0.37) - kEval037) <= 1e-8);
    CHECK(std::abs(derivative(m, 0.37, 1) - kDeriv1_037) <= 1e-8);
    CHECK(std::abs(derivative(m, 0.37, 2) - kDeriv2_037) <= 1e-7);
}

TEST_CASE("evaluate rejects points outside the domain") {
    const SplineModel m = fit(line_data(5, 1.0, 0.0), 0.1);
    CHECK_THROWS_AS(evaluate(m, -0.01), OutOfDomain);
    CHECK_THROWS_AS(evaluate(m, 1.01), OutOfDomain);
    CHECK_THROWS_AS(derivative(m, 1.2, 1), OutOfDomain);
}

TEST_CASE("derivatives of a linear model") {
    const SplineModel m = fit(line_data(6, 2.0, 1.0), 0.3);
    for (const double x : {0.0, 0.25, 0.77, 1.0}) {
        CHECK(derivative(m, x, 1) == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(std::abs(derivative(m, x, 2)) <= 1e-9);
    }
}

TEST_CASE("natural boundary conditions: zero curvature at the domain ends") {
    const SplineModel m = fit({kT7, kY7}, 0.003);
    CHECK(std::abs(derivative(m, 0.0, 2)) <= 1e-12);
    CHECK(std::abs(derivative(m, 1.0, 2)) <= 1e-12);
}

TEST_CASE("first derivative agrees with a finite difference of evaluate") {
    const SplineModel m = fit({kT7, kY7}, kLambda7);
    const double h = 1e-6;
    const double fd = (evaluate(m, 0.37 + h) - evaluate(m, 0.37 - h)) / (2 * h);
    CHECK(std::abs(derivative(m, 0.37, 1) - fd) <= 1e-5);
}

TEST_CASE("hat matrix reproduces its null space and the frozen fixture") {
    const HatMatrix A = hat_matrix(kT5, 0.1);
    // A * (linear data) = linear data
    for (std::size_t i = 0; i < 5; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < 5; ++j) acc += A(i, j) * (2.0 * kT5[j] + 1.0);
        CHECK(std::abs(acc - (2.0 * kT5[i] + 1.0)) <= 1e-9);
    }
    // frozen entries, symmetry, unit row sums
    for (std::size_t i = 0; i < 5; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < 5; ++j) {
            CHECK(std::abs(A(i, j) - kA5[i][j]) <= 1e-8);
            CHECK(std::abs(A(i, j) - A(j, i)) <= 1e-8);
            row += A(i, j);
        }
        CHECK(row == doctest::Approx(1.0).epsilon(1e-8));
    }
    // the two dense algebraic routes agree with each other
    const auto direct = oracle::dense_hat_matrix(kT5, 0.1);
    const auto qform = oracle::dense_hat_matrix_qform(kT5, 0.1);
    CHECK((direct - qform).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("weight function reproduces constants and the hat matrix") {
    const std::vector<double> t = {0.1, 0.3, 0.5, 0.7, 0.9};
    const double lambda = 0.02;
    for (const double x : {0.0, 0.23, 0.5, 0.97}) {
        double acc = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i)
            acc += weight_function(t, lambda, x, i);
        CHECK(acc / static_cast<double>(t.size()) == doctest::Approx(1.0).epsilon(1e-8));
    }
    const HatMatrix A = hat_matrix(t, lambda);
    Rng rng(5);
    std::vector<double> y(t.size());
    for (auto& v : y) v = rng.uniform(-1.0, 1.0);
    for (std::size_t j = 0; j < t.size(); ++j) {
        double viaW = 0.0, viaA = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            viaW += weight_function(t, lambda, t[j], i) * y[i];
            viaA += A(j, i) * y[i];
        }
        CHECK(std::abs(viaW / static_cast<double>(t.size()) - viaA) <= 1e-8);
    }
}

TEST_CASE("fit is linear in the data") {
    Rng rng(9);
    std::vector<double> t(11), y1(11), y2(11);
    for (std::size_t i = 0; i < t.size(); ++i)
        t[i] = (static_cast<double>(i) + rng.uniform(0.1, 0.9)) / 11.0;
    for (auto& v : y1) v = rng.uniform(-1.0, 1.0);
    for (auto& v : y2) v = rng.uniform(-1.0, 1.0);
    const double a = 1.7, b = -0.6;
    std::vector<double> yc(11);
    for (std::size_t i = 0; i < 11; ++i) yc[i] = a * y1[i] + b * y2[i];
    const SplineModel m1 = fit({t, y1}, 0.004);
    const SplineModel m2 = fit({t, y2}, 0.004);
    const SplineModel mc = fit({t, yc}, 0.004);
    for (const double x : linspace01(41))
        CHECK(std::abs(mc.value(x) - (a * m1.value(x) + b * m2.value(x))) <= 1e-8);
}

TEST_CASE("fit minimizes the penalized objective over natural splines") {
    Rng rng(31);
    std::vector<double> t(9), y(9);
    for (std::size_t i = 0; i < t.size(); ++i)
        t[i] = (static_cast<double>(i) + rng.uniform(0.1, 0.9)) / 9.0;
    for (auto& v : y) v = rng.uniform(-1.0, 1.0);
    const RegressionData data{t, y};
    const double lambda = 0.013;
    const SplineModel best = fit(data, lambda);
    const double opt = objective(data, lambda, best);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(t.size());
        for (auto& z : v) z = rng.uniform(-1.5, 1.5);
        const SplineModel g = natural_interpolant({t, v});
        CHECK(opt <= objective(data, lambda, g) + 1e-9);
    }
}

TEST_CASE("interpolation limit is monotone in lambda") {
    Rng rng(3);
    std::vector<double> t(12), y(12);
    for (std::size_t i = 0; i < t.size(); ++i)
        t[i] = (static_cast<double>(i) + rng.uniform(0.2, 0.8)) / 12.0;
    for (auto& v : y) v = rng.uniform(-1.0, 1.0);
    double prev = 1e300;
    for (const double lambda : {1e-4, 1e-8, 1e-12}) {
        const SplineModel m = fit({t, y}, lambda);
        double resid = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i)
            resid = std::max(resid, std::abs(m.knot_values()[i] - y[i]));
        CHECK(resid < prev);
        prev = resid;
    }
}

TEST_CASE("noiseless sup error shrinks at the lambda^{3/4} rate") {
    // sin(2pi t) has vanishing second derivative at both ends, so the
    // boundary layers scale like lambda^{3/4}; ratio for lambda/16 should sit
    // near 16^{3/4} = 8.
    const std::size_t n = 256;
    RegressionData d;
    d.points.resize(n);
    d.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        d.points[i] = static_cast<double>(i + 1) / static_cast<double>(n);
        d.values[i] = std::sin(2.0 * M_PI * d.points[i]);
    }
    const double lambda = 1e-5;
    const SplineModel m1 = fit(d, lambda);
    const SplineModel m2 = fit(d, lambda / 16.0);
    double e1 = 0.0, e2 = 0.0;
    for (const double x : linspace01(2001)) {
        const double target = std::sin(2.0 * M_PI * x);
        e1 = std::max(e1, std::abs(m1.value(x) - target));
        e2 = std::max(e2, std::abs(m2.value(x) - target));
    }
    const double ratio = e1 / e2;
    CHECK(ratio >= 6.0);
    CHECK(ratio <= 12.0);
}

TEST_CASE("banded solver equals the dense construction on small instances") {
    Rng rng(1001);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 3 + rng.next_index(48);
        std::vector<double> t(n), y(n);
        bool ok = false;
        while (!ok) {
            for (auto& v : t) v = rng.uniform(0.0, 1.0);
            std::sort(t.begin(), t.end());
            ok = true;
            for (std::size_t i = 0; i + 1 < n; ++i)
                if (t[i + 1] - t[i] < 1e-4) ok = false;
        }
        for (auto& v : y) v = rng.uniform(-1.0, 1.0);
        const double lambda = std::pow(10.0, rng.uniform(-6.0, 0.0));
        const SplineModel banded = fit({t, y}, lambda);
        const auto dense = oracle::dense_fit(t, y, lambda);
        for (const double x : linspace01(23)) {
            const double dv = oracle::dense_evaluate(dense, x);
            CHECK(std::abs(banded.value(x) - dv) <= 1e-8 * (1.0 + std::abs(dv)));
        }
    }
}

TEST_CASE("invalid inputs raise the documented errors") {
    CHECK_THROWS_AS(fit({{0.1, 0.1, 0.5}, {1.0, 2.0, 3.0}}, 0.1), InvalidAbscissae);
    CHECK_THROWS_AS(fit({{0.5, 0.1, 0.9}, {1.0, 2.0, 3.0}}, 0.1), InvalidAbscissae);
    CHECK_THROWS_AS(fit({{0.1, 1.5, 1.7}, {1.0, 2.0, 3.0}}, 0.1), InvalidAbscissae);
    CHECK_THROWS_AS(fit({{0.1, 0.5}, {1.0, 2.0}}, 0.1), TooFewPoints);
    CHECK_THROWS_AS(fit({{0.1, 0.5, 0.9}, {1.0, 2.0, 3.0}}, 0.0), InvalidLambda);
    CHECK_THROWS_AS(fit({{0.1, 0.5, 0.9}, {1.0, 2.0, 3.0}}, -1.0), InvalidLambda);
}

TEST_CASE("spacing accessors include the boundary gaps in the maximum") {
    const RegressionData d{{0.2, 0.3, 0.6}, {0.0, 0.0, 0.0}};
    CHECK(d.delta_max() == doctest::Approx(0.4));  // gap to the right boundary
    CHECK(d.delta_min() == doctest::Approx(0.1));
}

TEST_CASE("natural interpolant hits every data point") {
    Rng rng(8);
    std::vector<double> t(6), y(6);
    for (std::size_t i = 0; i < t.size(); ++i)
        t[i] = (static_cast<double>(i) + rng.uniform(0.2, 0.8)) / 6.0;
    for (auto& v : y) v = rng.uniform(-2.0, 2.0);
    const SplineModel m = natural_interpolant({t, y});
    for (std::size_t i = 0; i < t.size(); ++i)
        CHECK(m.value(t[i]) == doctest::Approx(y[i]).epsilon(1e-12));
    // two points degenerate to the chord
    const SplineModel line = natural_interpolant({{0.2, 0.8}, {1.0, 4.0}});
    CHECK(line.value(0.5) == doctest::Approx(2.5));
    CHECK(line.deriv(0.5, 2) == 0.0);
}
