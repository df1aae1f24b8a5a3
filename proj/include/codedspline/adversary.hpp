#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "codedspline/codec.hpp"

namespace codedspline {

enum class Strategy { None, ClusterMax, ImpossibilityPoly, RandomUniform };

Strategy strategy_from_string(const std::string& name);
std::string strategy_name(Strategy s);

struct AttackPlan {
    std::size_t gamma = 0;
    Strategy strategy = Strategy::None;
    double delta = 1.0;                        // target displacement of the polynomial attack
    std::optional<std::size_t> target_index;   // 0-based alpha index; defaults to the
                                               // paper's alpha_{floor(K/2)} (1-based)
    std::uint64_t seed = 0;
};

// Indices (0-based, sorted) of the workers the adversary overwrites.
std::vector<std::size_t> select_corrupted(const AttackPlan& plan, const CodedTask& task);

// Degree-7 polynomial matching the encoder's value and first two derivatives
// at both window edges and hitting y_target at alpha_mid; the spare degree of
// freedom is resolved by the minimum-norm coefficient vector in the shifted
// variable s = (x - alpha_min) / (alpha_max - alpha_min).
struct AttackPolynomial {
    double x_lo = 0.0, x_hi = 1.0;
    std::array<double, 8> coeffs{};  // monomial coefficients in s

    double operator()(double x) const;
};

AttackPolynomial build_attack_polynomial(const SplineModel& encoder, double alpha_min,
                                         double alpha_max, double alpha_mid, double y_target);

// Replaces the responses of the corrupted workers according to the strategy;
// honest responses pass through untouched. All corrupted values stay inside
// [-M, M]^m.
std::vector<std::vector<double>> corrupt_responses(
    const AttackPlan& plan, const std::vector<std::size_t>& corrupted,
    const std::vector<std::vector<double>>& honest, const CodedTask& task,
    const VectorSpline& encoder);

}  // namespace codedspline
