#pragma once

#include "scenrisk/riskcore.hpp"

#include <cstdint>
#include <vector>

namespace scenrisk {

struct FairnessCertificate {
    std::size_t checks = 0;          ///< sampled + basis + all-ones weight vectors
    double worst_slack = 0.0;        ///< min over checks of rho(sum a_j X_j) - sum a_j k_j
    std::vector<double> worst_alpha;
    /// max | sum a_j k_j + <sum a_j X_j, a*> | over the checks (linearity witness).
    double witness_error = 0.0;
    bool passed = false;
};

struct AllocationResult {
    std::vector<double> k;
    std::size_t maximizer = 0;
    double rho_total = 0.0;
    /// Every element tied for the maximum at the aggregate position.
    std::vector<std::size_t> tied_maximizers;
    double allocation_sum = 0.0;
};

inline constexpr double kFairnessTol = 1e-12;
inline constexpr std::size_t kDefaultFairnessSamples = 1000;

/// k_i = -<X_i, a*> for the lowest-index maximizer a* at X = sum X_i.
/// Coherent specs only.
AllocationResult allocate(const RiskMeasureSpec& spec, const std::vector<AdaptedProcess>& positions);

/// Same, pinned to a given maximizing element.
AllocationResult allocate_with(const RiskMeasureSpec& spec, const std::vector<AdaptedProcess>& positions,
                               std::size_t maximizer);

/// Checks sum_j a_j k_j <= rho(sum_j a_j X_j) + kFairnessTol for seeded
/// uniform a in [0,1]^N, every basis vector and the all-ones vector.
FairnessCertificate fairness_check(const AllocationResult& result, const RiskMeasureSpec& spec,
                                   const std::vector<AdaptedProcess>& positions, std::size_t samples,
                                   std::uint64_t seed);

} // namespace scenrisk
