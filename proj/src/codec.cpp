#include "codedspline/codec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "codedspline/errors.hpp"

namespace codedspline {

CodedTask make_task(std::vector<std::vector<double>> inputs, double bound,
                    std::size_t dim_out, std::size_t num_workers) {
    CodedTask task;
    const std::size_t k = inputs.size();
    task.dim_in = k > 0 ? inputs.front().size() : 0;
    task.dim_out = dim_out;
    task.bound = bound;
    task.inputs = std::move(inputs);
    task.alpha.resize(k);
    for (std::size_t i = 0; i < k; ++i)
        task.alpha[i] = static_cast<double>(i + 1) / static_cast<double>(k + 1);
    task.beta.resize(num_workers);
    for (std::size_t i = 0; i < num_workers; ++i)
        task.beta[i] = static_cast<double>(i + 1) / static_cast<double>(num_workers);
    validate_task(task);
    return task;
}

void validate_task(const CodedTask& task) {
    const std::size_t k = task.alpha.size();
    if (k < 2) throw TooFewPoints("need at least 2 inputs");
    if (task.inputs.size() != k) throw InvalidAbscissae("inputs/alpha length mismatch");
    if (task.beta.size() < std::max<std::size_t>(k, 3))
        throw TooFewPoints("need N >= max(K, 3) workers");
    if (!(task.bound > 0.0)) throw ResponseOutOfRange("bound M must be positive");
    for (std::size_t i = 0; i < k; ++i) {
        if (!(task.alpha[i] > 0.0 && task.alpha[i] < 1.0))
            throw InvalidAbscissae("alpha outside (0,1)");
        if (i > 0 && !(task.alpha[i] > task.alpha[i - 1]))
            throw InvalidAbscissae("alpha not strictly increasing");
        if (task.inputs[i].size() != task.dim_in)
            throw InvalidAbscissae("ragged input dimensions");
    }
    for (std::size_t i = 0; i < task.beta.size(); ++i) {
        if (!(task.beta[i] > 0.0 && task.beta[i] <= 1.0))
            throw InvalidAbscissae("beta outside (0,1]");
        if (i > 0 && !(task.beta[i] > task.beta[i - 1]))
            throw InvalidAbscissae("beta not strictly increasing");
    }
}

VectorSpline design_encoder(const CodedTask& task, double lambda_e) {
    if (lambda_e < 0.0) throw InvalidLambda("lambda_e must be nonnegative");
    VectorSpline enc;
    enc.components.reserve(task.dim_in);
    RegressionData data;
    data.points = task.alpha;
    data.values.resize(task.num_inputs());
    for (std::size_t dim = 0; dim < task.dim_in; ++dim) {
        for (std::size_t kk = 0; kk < task.num_inputs(); ++kk)
            data.values[kk] = task.inputs[kk][dim];
        enc.components.push_back(lambda_e == 0.0 ? natural_interpolant(data)
                                                 : fit(data, lambda_e));
    }
    return enc;
}

std::vector<std::vector<double>> encode(const VectorSpline& encoder,
                                        const std::vector<double>& beta) {
    std::vector<std::vector<double>> coded(beta.size(),
                                           std::vector<double>(encoder.components.size()));
    for (std::size_t n = 0; n < beta.size(); ++n) {
        if (!(beta[n] >= 0.0 && beta[n] <= 1.0)) throw OutOfDomain("beta outside [0,1]");
        for (std::size_t dim = 0; dim < encoder.components.size(); ++dim)
            coded[n][dim] = encoder.components[dim].value(beta[n]);
    }
    return coded;
}

double choose_lambda_d(std::size_t num_workers, double a, double j_const, double c_lambda) {
    if (num_workers < 2) throw TooFewPoints("need N >= 2");
    if (!(a >= 0.0 && a < 1.0)) throw InvalidExponent("exponent a must lie in [0,1)");
    const double n = static_cast<double>(num_workers);
    const double raw = j_const * std::pow(n, 1.6 * (a - 1.0));
    const double lower = c_lambda * std::pow(n, -4.0) * (1.0 + 1e-9);
    return std::min(std::max(raw, lower), 1.0);
}

std::vector<std::vector<double>> decode(const std::vector<double>& beta,
                                        const std::vector<std::vector<double>>& responses,
                                        double lambda_d, const std::vector<double>& alpha,
                                        double bound, RangePolicy policy) {
    if (!(lambda_d > 0.0 && lambda_d <= 1.0)) throw InvalidLambda("lambda_d must be in (0, 1]");
    if (responses.size() != beta.size())
        throw InvalidAbscissae("one response per decoder point required");
    const std::size_t m = responses.empty() ? 0 : responses.front().size();
    for (const auto& r : responses) {
        if (r.size() != m) throw InvalidAbscissae("ragged responses");
        if (policy == RangePolicy::Reject)
            for (const double v : r)
                if (std::abs(v) > bound)
                    throw ResponseOutOfRange("response outside [-M, M]: " + std::to_string(v));
    }
    SmoothingSolver solver(beta, lambda_d);
    std::vector<std::vector<double>> out(alpha.size(), std::vector<double>(m));
    std::vector<double> column(beta.size());
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t n = 0; n < beta.size(); ++n)
            column[n] = std::clamp(responses[n][j], -bound, bound);
        const SplineModel u = solver.fit(column);
        for (std::size_t kk = 0; kk < alpha.size(); ++kk) out[kk][j] = u.value(alpha[kk]);
    }
    return out;
}

}  // namespace codedspline
