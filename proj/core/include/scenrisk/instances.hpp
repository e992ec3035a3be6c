#pragma once

#include "scenrisk/riskcore.hpp"

#include <vector>

namespace scenrisk {

/// Tail level alpha, strictly inside (0, 1).
class QuantileLevel {
public:
    explicit QuantileLevel(double alpha);
    double value() const { return alpha_; }

private:
    double alpha_;
};

/// -inf{ x : P[Y <= x] > alpha }, taken over realized values with the strict
/// inequality exactly as stated, atoms included.
double var_alpha(const StaticRV& y, QuantileLevel alpha);

/// Tail conditional expectation E[Y | Y < -VaR_alpha(Y)].
/// Throws UndefinedError when the conditioning event is empty.
double es_tce(const StaticRV& y, QuantileLevel alpha);

/// Coherent expected shortfall min_t { t + E[(-Y - t)^+] / alpha }, scanned
/// over the realized losses.
double avar(const StaticRV& y, QuantileLevel alpha);

/// Density attaining avar(y): 1/alpha on the largest losses (ties by leaf
/// order) with a fractional value on at most one boundary leaf.
StaticRV avar_maximizing_density(const StaticRV& y, QuantileLevel alpha);

inline constexpr std::size_t kAvarLeafCap = 20;

/// Coherent spec whose generating family is every vertex of
/// { f : 0 <= f <= 1/alpha, E[f] = 1 }, each embedded as terminal optional
/// mass. Throws ValidationError above the leaf cap.
RiskMeasureSpec avar_spec(const TreePtr& tree, QuantileLevel alpha, std::size_t leaf_cap = kAvarLeafCap);

/// Coherent spec generated by the maximizing densities of the given payoffs
/// only. Agrees with the full AVaR spec on those payoffs (and bounds it from
/// below elsewhere); usable on trees beyond the enumeration cap.
RiskMeasureSpec avar_support_spec(const TreePtr& tree, QuantileLevel alpha, const std::vector<StaticRV>& payoffs);

/// One normalized terminal Dirac element per leaf, labelled "a_<leaf id>".
RiskMeasureSpec worst_case_spec(const TreePtr& tree);

/// (1/beta) log E[exp(-beta Y)], evaluated with a max shift.
double entropic(const StaticRV& y, double beta);

struct StoppingResult {
    double value = 0.0;
    /// Leaf-indexed stopping depth.
    std::vector<int> tau;
};

/// sup over stopping times of E[-X_tau] by backward induction; ties stop early.
StoppingResult stopped_worst_case(const AdaptedProcess& x);

} // namespace scenrisk
