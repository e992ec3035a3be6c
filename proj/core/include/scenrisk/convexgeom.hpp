#pragma once

#include <optional>
#include <vector>

namespace scenrisk {

/**
 * Find weights lambda on the probability simplex with
 *
 *     | sum_i lambda_i * columns[i] - target |_j <= tol   for every coordinate j
 *
 * minimizing sum_i lambda_i * costs[i].
 */
struct SimplexProgram {
    std::vector<std::vector<double>> columns;
    std::vector<double> target;
    std::vector<double> costs;
};

struct Combination {
    std::vector<double> weights;
    double cost = 0.0;
};

inline constexpr double kDefaultFeasibilityTol = 1e-9;

/// Two-phase simplex over exact rationals with Bland's smallest-index rule.
/// The smallest achievable residual is found first and the cost is minimized
/// inside that residual box, so the tolerance never trades accuracy for cost.
/// Returns nullopt when no simplex combination reaches the target within tol.
/// Throws ValidationError on dimension mismatch, no columns, or tol <= 0.
std::optional<Combination> min_cost_combination(const SimplexProgram& prog,
                                                double tol = kDefaultFeasibilityTol);

} // namespace scenrisk
