#include "codedspline/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "codedspline/errors.hpp"
#include "codedspline/rng.hpp"

namespace codedspline {

Strategy strategy_from_string(const std::string& name) {
    if (name == "none") return Strategy::None;
    if (name == "cluster_max") return Strategy::ClusterMax;
    if (name == "impossibility_poly") return Strategy::ImpossibilityPoly;
    if (name == "random_uniform") return Strategy::RandomUniform;
    throw NotFound("unknown strategy: " + name);
}

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::None: return "none";
        case Strategy::ClusterMax: return "cluster_max";
        case Strategy::ImpossibilityPoly: return "impossibility_poly";
        default: return "random_uniform";
    }
}

namespace {

std::size_t default_target_index(const AttackPlan& plan, const CodedTask& task) {
    if (plan.target_index) {
        if (*plan.target_index >= task.num_inputs())
            throw OutOfDomain("target index out of range");
        return *plan.target_index;
    }
    // alpha_{floor(K/2)} with the paper's 1-based indexing
    const std::size_t k = task.num_inputs();
    return k / 2 > 0 ? k / 2 - 1 : 0;
}

std::vector<std::size_t> cluster_indices(const AttackPlan& plan, const CodedTask& task) {
    const std::size_t per_alpha = plan.gamma / task.num_inputs();
    std::vector<std::size_t> picked;
    std::vector<bool> seen(task.num_workers(), false);
    std::vector<std::size_t> order(task.num_workers());
    for (const double a : task.alpha) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
            return std::abs(task.beta[i] - a) < std::abs(task.beta[j] - a);
        });
        for (std::size_t r = 0; r < per_alpha && r < order.size(); ++r) {
            if (picked.size() >= plan.gamma) break;
            if (!seen[order[r]]) {
                seen[order[r]] = true;
                picked.push_back(order[r]);
            }
        }
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

struct Window {
    double lo, hi, mid;
};

Window impossibility_window(const AttackPlan& plan, const CodedTask& task) {
    const std::size_t mid_idx = default_target_index(plan, task);
    const double mid = task.alpha[mid_idx];
    const double w = static_cast<double>(plan.gamma) / static_cast<double>(task.num_workers());
    return {std::max(0.0, mid - w / 2.0), std::min(1.0, mid + w / 2.0), mid};
}

std::vector<std::size_t> impossibility_indices(const AttackPlan& plan, const CodedTask& task) {
    const Window win = impossibility_window(plan, task);
    std::vector<std::size_t> inside;
    for (std::size_t i = 0; i < task.num_workers(); ++i)
        if (task.beta[i] >= win.lo && task.beta[i] <= win.hi) inside.push_back(i);
    if (inside.size() > plan.gamma) {
        // keep the indices closest to the target point
        std::stable_sort(inside.begin(), inside.end(), [&](std::size_t i, std::size_t j) {
            return std::abs(task.beta[i] - win.mid) < std::abs(task.beta[j] - win.mid);
        });
        inside.resize(plan.gamma);
        std::sort(inside.begin(), inside.end());
    }
    return inside;
}

std::vector<std::size_t> random_indices(const AttackPlan& plan, const CodedTask& task) {
    // partial Fisher-Yates over [0, N)
    std::vector<std::size_t> pool(task.num_workers());
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    Rng rng(derive_seed(plan.seed, 0x5e1ec7));
    for (std::size_t i = 0; i < plan.gamma; ++i) {
        const std::size_t j = i + rng.next_index(pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(plan.gamma);
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace

std::vector<std::size_t> select_corrupted(const AttackPlan& plan, const CodedTask& task) {
    if (plan.gamma > task.num_workers()) throw BudgetExceeded("gamma exceeds worker count");
    if (plan.strategy == Strategy::None || plan.gamma == 0) return {};
    switch (plan.strategy) {
        case Strategy::ClusterMax: return cluster_indices(plan, task);
        case Strategy::ImpossibilityPoly: return impossibility_indices(plan, task);
        default: return random_indices(plan, task);
    }
}

double AttackPolynomial::operator()(double x) const {
    const double s = (x - x_lo) / (x_hi - x_lo);
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * s + coeffs[i];
    return acc;
}

AttackPolynomial build_attack_polynomial(const SplineModel& encoder, double alpha_min,
                                         double alpha_max, double alpha_mid, double y_target) {
    if (!(alpha_min < alpha_mid && alpha_mid < alpha_max))
        throw OutOfDomain("need alpha_min < alpha_mid < alpha_max");
    const double w = alpha_max - alpha_min;
    if (w < 1e-8) throw IllConditioned("attack window too narrow");

    // Hermite constraints in the shifted variable: d^k/dx^k = w^-k d^k/ds^k.
    Eigen::Matrix<double, 7, 8> A = Eigen::Matrix<double, 7, 8>::Zero();
    Eigen::Matrix<double, 7, 1> b;
    const double s_mid = (alpha_mid - alpha_min) / w;
    const auto fill_row = [&](int row, double s, int order) {
        for (int i = order; i < 8; ++i) {
            double coef = 1.0;
            for (int q = 0; q < order; ++q) coef *= static_cast<double>(i - q);
            A(row, i) = coef * std::pow(s, i - order);
        }
    };
    fill_row(0, 0.0, 0);
    fill_row(1, 0.0, 1);
    fill_row(2, 0.0, 2);
    fill_row(3, 1.0, 0);
    fill_row(4, 1.0, 1);
    fill_row(5, 1.0, 2);
    fill_row(6, s_mid, 0);
    b << encoder.value(alpha_min), encoder.deriv(alpha_min, 1) * w,
        encoder.deriv(alpha_min, 2) * w * w, encoder.value(alpha_max),
        encoder.deriv(alpha_max, 1) * w, encoder.deriv(alpha_max, 2) * w * w, y_target;

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    if (cod.rank() < 7) throw IllConditioned("attack constraint system is rank deficient");
    const Eigen::VectorXd p = cod.solve(b);  // minimum-norm solution

    AttackPolynomial poly;
    poly.x_lo = alpha_min;
    poly.x_hi = alpha_max;
    for (int i = 0; i < 8; ++i) poly.coeffs[static_cast<std::size_t>(i)] = p[i];
    return poly;
}

std::vector<std::vector<double>> corrupt_responses(
    const AttackPlan& plan, const std::vector<std::size_t>& corrupted,
    const std::vector<std::vector<double>>& honest, const CodedTask& task,
    const VectorSpline& encoder) {
    std::vector<std::vector<double>> out = honest;
    if (corrupted.empty() || plan.strategy == Strategy::None) return out;
    const double m_bound = task.bound;

    switch (plan.strategy) {
        case Strategy::ClusterMax:
            for (const std::size_t i : corrupted)
                std::fill(out[i].begin(), out[i].end(), m_bound);
            break;
        case Strategy::ImpossibilityPoly: {
            // the theorem's construction is one-dimensional
            if (task.dim_in != 1)
                throw Unsupported("impossibility_poly requires a one-dimensional input");
            const std::size_t mid_idx = default_target_index(plan, task);
            const Window win = impossibility_window(plan, task);
            const SplineModel& ue = encoder.components.front();
            const double displacement =
                ue.value(win.mid) - task.inputs[mid_idx].front();  // delta in the proof
            const double y_target =
                ue.value(win.mid) + plan.delta + 2.0 * std::abs(displacement);
            const AttackPolynomial poly =
                build_attack_polynomial(ue, win.lo, win.hi, win.mid, y_target);
            for (const std::size_t i : corrupted) {
                const double v = std::clamp(poly(task.beta[i]), -m_bound, m_bound);
                std::fill(out[i].begin(), out[i].end(), v);
            }
            break;
        }
        default: {  // RandomUniform
            Rng rng(derive_seed(plan.seed, 0xc0de));
            for (const std::size_t i : corrupted)
                for (double& v : out[i]) v = rng.uniform(-m_bound, m_bound);
            break;
        }
    }
    return out;
}

}  // namespace codedspline
