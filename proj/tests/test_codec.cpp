#include <doctest.h>

#include <cmath>
#include <vector>

#include "codedspline/codec.hpp"
#include "codedspline/dense_oracle.hpp"
#include "codedspline/errors.hpp"
#include "codedspline/rng.hpp"

using namespace codedspline;

namespace {

// frozen with the independent numpy banded implementation
const std::vector<double> kResp16 = {
    0.57186461708498615, 0.10234391160063039, -0.51222360609312356, -0.33109358704414382,
    -0.36261960446443542, -0.21969197766967175, 0.60260135928472103, -0.81839672001664021,
    -0.25275121447107129, 0.58264580052833637, 0.51734292913672397, 0.20795007876054838,
    -0.73850433436638463, -0.28031063369848042, 0.74160970499484336, 0.95626623390808208};
const double kFhat16[2] = {-0.079923977343769964, 0.11098219127062832};

CodedTask scalar_task(const std::vector<double>& xs, double bound, std::size_t n) {
    std::vector<std::vector<double>> inputs;
    for (const double x : xs) inputs.push_back({x});
    return make_task(std::move(inputs), bound, 1, n);
}

std::vector<double> beta_points(std::size_t n) {
    std::vector<double> beta(n);
    for (std::size_t i = 0; i < n; ++i)
        beta[i] = static_cast<double>(i + 1) / static_cast<double>(n);
    return beta;
}

}  // namespace

TEST_CASE("make_task lays out the default points") {
    const CodedTask task = scalar_task({0.3, 0.9, 0.1, 0.5}, 2.0, 12);
    REQUIRE(task.alpha.size() == 4);
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(task.alpha[k] == doctest::Approx((k + 1) / 5.0));
    REQUIRE(task.beta.size() == 12);
    for (std::size_t i = 0; i < 12; ++i)
        CHECK(task.beta[i] == doctest::Approx((i + 1) / 12.0));
}

TEST_CASE("task invariants are enforced") {
    CHECK_THROWS_AS(scalar_task({0.5}, 2.0, 8), TooFewPoints);
    CHECK_THROWS_AS(scalar_task({0.1, 0.2, 0.3, 0.4}, 2.0, 3), TooFewPoints);  // N < K
    CodedTask bad = scalar_task({0.1, 0.2, 0.3}, 2.0, 8);
    bad.alpha[1] = bad.alpha[0];  // duplicate encoder point
    CHECK_THROWS_AS(validate_task(bad), InvalidAbscissae);
    CHECK_THROWS_AS(design_encoder(bad, 0.0), InvalidAbscissae);
    bad = scalar_task({0.1, 0.2, 0.3}, 2.0, 8);
    bad.bound = 0.0;
    CHECK_THROWS_AS(validate_task(bad), ResponseOutOfRange);
}

TEST_CASE("encoder through collinear inputs is the line") {
    CodedTask task = scalar_task({0.0, 0.0, 0.0, 0.0}, 10.0, 8);
    for (std::size_t k = 0; k < 4; ++k) task.inputs[k][0] = 2.0 * task.alpha[k] + 1.0;
    const VectorSpline enc = design_encoder(task, 0.0);
    REQUIRE(enc.components.size() == 1);
    for (int i = 0; i <= 50; ++i) {
        const double x = i / 50.0;
        CHECK(std::abs(enc.components[0].value(x) - (2.0 * x + 1.0)) <= 1e-12);
    }
}

TEST_CASE("encoder with lambda_e = 0 interpolates") {
    Rng rng(23);
    std::vector<double> xs(6);
    for (auto& v : xs) v = rng.uniform(-3.0, 3.0);
    const CodedTask task = scalar_task(xs, 10.0, 12);
    const VectorSpline enc = design_encoder(task, 0.0);
    for (std::size_t k = 0; k < xs.size(); ++k)
        CHECK(std::abs(enc.components[0].value(task.alpha[k]) - xs[k]) <= 1e-9);
}

TEST_CASE("encoder with lambda_e > 0 equals the smoothing-spline fit") {
    Rng rng(24);
    std::vector<double> xs(5);
    for (auto& v : xs) v = rng.uniform(-2.0, 2.0);
    const CodedTask task = scalar_task(xs, 10.0, 8);
    const double lambda_e = 1e-3;
    const VectorSpline enc = design_encoder(task, lambda_e);
    const auto dense = oracle::dense_fit(task.alpha, xs, lambda_e);
    for (int i = 0; i <= 40; ++i) {
        const double x = i / 40.0;
        const double dv = oracle::dense_evaluate(dense, x);
        CHECK(std::abs(enc.components[0].value(x) - dv) <= 1e-8 * (1.0 + std::abs(dv)));
    }
}

TEST_CASE("encode evaluates componentwise") {
    CodedTask task = scalar_task({1.0, 1.0, 1.0}, 10.0, 8);
    VectorSpline constant = design_encoder(task, 0.0);
    for (const auto& coded : encode(constant, task.beta)) CHECK(coded[0] == doctest::Approx(1.0));

    for (std::size_t k = 0; k < 3; ++k) task.inputs[k][0] = 2.0 * task.alpha[k] + 1.0;
    const VectorSpline linear = design_encoder(task, 0.0);
    const auto coded = encode(linear, {0.5});
    CHECK(coded[0][0] == doctest::Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_AS(encode(linear, {1.5}), OutOfDomain);
}

TEST_CASE("lambda_d selection rule") {
    CHECK(choose_lambda_d(100, 0.5, 1.0, 1.0) ==
          doctest::Approx(std::pow(100.0, -0.8)).epsilon(1e-12));
    CHECK(choose_lambda_d(100, 0.5, 1.0, 1.0) == doctest::Approx(0.025118864315095794));
    CHECK(choose_lambda_d(2, 0.0, 1e6, 1.0) == 1.0);  // upper clamp
    const double lower = choose_lambda_d(10, 0.0, 1e-12, 1.0);
    CHECK(lower == doctest::Approx(1e-4 * (1.0 + 1e-9)).epsilon(1e-12));
    CHECK(lower > 1e-4);
    CHECK_THROWS_AS(choose_lambda_d(100, 1.0, 1.0, 1.0), InvalidExponent);
    CHECK_THROWS_AS(choose_lambda_d(100, -0.1, 1.0, 1.0), InvalidExponent);
}

TEST_CASE("decode of constant responses is constant") {
    const auto beta = beta_points(16);
    std::vector<std::vector<double>> resp(16, {0.7, -0.4});
    const auto out = decode(beta, resp, 0.05, {0.25, 0.5, 0.75}, 1.0);
    for (const auto& v : out) {
        CHECK(v[0] == doctest::Approx(0.7).epsilon(1e-10));
        CHECK(v[1] == doctest::Approx(-0.4).epsilon(1e-10));
    }
}

TEST_CASE("decode tracks a linear target through the null space") {
    const auto beta = beta_points(64);
    std::vector<std::vector<double>> resp(64);
    for (std::size_t i = 0; i < 64; ++i) resp[i] = {2.0 * beta[i] - 0.5};
    std::vector<double> alpha(4);
    for (std::size_t k = 0; k < 4; ++k) alpha[k] = (k + 1) / 5.0;
    const auto out = decode(beta, resp, 1e-8, alpha, 2.0);
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(std::abs(out[k][0] - (2.0 * alpha[k] - 0.5)) <= 1e-4);
}

TEST_CASE("decode matches the frozen oracle pipeline") {
    const auto beta = beta_points(16);
    std::vector<std::vector<double>> resp(16);
    for (std::size_t i = 0; i < 16; ++i) resp[i] = {kResp16[i]};
    const auto out = decode(beta, resp, 0.01, {0.3, 0.7}, 1.0);
    CHECK(std::abs(out[0][0] - kFhat16[0]) <= 1e-8);
    CHECK(std::abs(out[1][0] - kFhat16[1]) <= 1e-8);
    // in-process dense oracle agrees too
    const auto dense = oracle::dense_fit(beta, kResp16, 0.01);
    CHECK(std::abs(out[0][0] - oracle::dense_evaluate(dense, 0.3)) <= 1e-8);
    CHECK(std::abs(out[1][0] - oracle::dense_evaluate(dense, 0.7)) <= 1e-8);
}

TEST_CASE("decode is linear in the responses") {
    Rng rng(41);
    const auto beta = beta_points(20);
    std::vector<std::vector<double>> r1(20), r2(20), rc(20);
    const double a = 0.6, b = -1.1;
    for (std::size_t i = 0; i < 20; ++i) {
        r1[i] = {rng.uniform(-0.3, 0.3)};
        r2[i] = {rng.uniform(-0.3, 0.3)};
        rc[i] = {a * r1[i][0] + b * r2[i][0]};
    }
    const std::vector<double> alpha{0.2, 0.5, 0.8};
    const auto o1 = decode(beta, r1, 0.02, alpha, 1.0);
    const auto o2 = decode(beta, r2, 0.02, alpha, 1.0);
    const auto oc = decode(beta, rc, 0.02, alpha, 1.0);
    for (std::size_t k = 0; k < alpha.size(); ++k)
        CHECK(std::abs(oc[k][0] - (a * o1[k][0] + b * o2[k][0])) <= 1e-8);
}

TEST_CASE("output coordinates decode independently") {
    Rng rng(42);
    const auto beta = beta_points(24);
    std::vector<std::vector<double>> resp(24), swapped(24);
    for (std::size_t i = 0; i < 24; ++i) {
        resp[i] = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        swapped[i] = {resp[i][1], resp[i][0]};
    }
    const std::vector<double> alpha{0.3, 0.6};
    const auto out = decode(beta, resp, 0.01, alpha, 1.5);
    const auto out_sw = decode(beta, swapped, 0.01, alpha, 1.5);
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        CHECK(out[k][0] == out_sw[k][1]);
        CHECK(out[k][1] == out_sw[k][0]);
    }
}

TEST_CASE("out-of-range responses: clamp by default, reject on demand") {
    const auto beta = beta_points(12);
    std::vector<std::vector<double>> resp(12, {0.0});
    resp[5][0] = 3.0;  // outside [-1, 1]
    const auto clamped = decode(beta, resp, 0.05, {0.5}, 1.0);
    CHECK(std::isfinite(clamped[0][0]));
    CHECK_THROWS_AS(decode(beta, resp, 0.05, {0.5}, 1.0, RangePolicy::Reject),
                    ResponseOutOfRange);
    CHECK_THROWS_AS(decode(beta, resp, 0.0, {0.5}, 1.0), InvalidLambda);
    CHECK_THROWS_AS(decode(beta, resp, 1.5, {0.5}, 1.0), InvalidLambda);
}

TEST_CASE("honest decoder error shrinks at the lambda^{3/4} rate") {
    // Inputs on the line spanning the interval between two roots of the
    // second derivative of x sin x, so the composed target has flat
    // curvature at both ends and the boundary layers scale like
    // lambda^{3/4}; the sup-error ratio for lambda vs lambda/16 then sits
    // near 16^{3/4} = 8.
    const double c = 1.0768739863118044;
    const double s = 3.643597167425701 - c;
    const auto f = [&](double x) { return x * std::sin(x); };
    for (const std::size_t n : {std::size_t{512}, std::size_t{1024}}) {
        std::vector<double> xs(10);
        std::vector<double> alpha(10);
        for (std::size_t k = 0; k < 10; ++k) {
            alpha[k] = (k + 1) / 11.0;
            xs[k] = c + s * alpha[k];
        }
        const CodedTask task = scalar_task(xs, 7.0, n);
        const VectorSpline enc = design_encoder(task, 0.0);
        RegressionData d;
        d.points = task.beta;
        d.values.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            d.values[i] = f(enc.components[0].value(task.beta[i]));
        const double lambda = 1e-5;
        const SplineModel u1 = fit(d, lambda);
        const SplineModel u2 = fit(d, lambda / 16.0);
        double e1 = 0.0, e2 = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            const double z = i / 2000.0;
            const double target = f(enc.components[0].value(z));
            e1 = std::max(e1, std::abs(u1.value(z) - target));
            e2 = std::max(e2, std::abs(u2.value(z) - target));
        }
        const double ratio = e1 / e2;
        CHECK(ratio >= 5.0);
        CHECK(ratio <= 13.0);
    }
}
