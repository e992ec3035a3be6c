#pragma once

#include "scenrisk/bimeasure.hpp"
#include "scenrisk/convexgeom.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace scenrisk {

/// One generating scenario (a in D_sigma) with its penalty.
struct SpecElement {
    BiMeasure measure;
    double gamma = 0.0;
    std::string label;
};

/**
 * Risk measure given by a finite generating family:
 *
 *     rho(X) = max_i { -<X, a_i> - gamma_i }.
 *
 * Every a_i is a positive bi-measure of unit A^1 norm. Penalties are shifted
 * at construction so that min gamma = 0, which makes rho(0) = 0. A spec with
 * all penalties zero is coherent.
 */
class RiskMeasureSpec {
public:
    /// Throws ValidationError for an empty family, a tree mismatch, a
    /// non-positive measure, a norm off 1 by more than 1e-9, or a non-finite
    /// penalty.
    RiskMeasureSpec(TreePtr tree, std::vector<SpecElement> elements);

    const TreePtr& tree() const { return tree_; }
    const std::vector<SpecElement>& elements() const { return elements_; }
    const SpecElement& operator[](std::size_t i) const { return elements_[i]; }
    std::size_t size() const { return elements_.size(); }
    bool coherent() const { return coherent_; }
    /// Amount subtracted from every supplied penalty during normalization.
    double gamma_shift() const { return gamma_shift_; }

    /// Same generating measures, new penalties (renormalized).
    RiskMeasureSpec with_gammas(const std::vector<double>& gammas) const;

private:
    TreePtr tree_;
    std::vector<SpecElement> elements_;
    bool coherent_ = true;
    double gamma_shift_ = 0.0;
};

inline constexpr double kArgmaxTol = 1e-12;

struct Evaluation {
    double value = 0.0;
    /// All indices within kArgmaxTol of the maximum, ascending.
    std::vector<std::size_t> argmax;
    /// -<X, a_i> - gamma_i for every element.
    std::vector<double> scores;
};

Evaluation rho_eval(const RiskMeasureSpec& spec, const AdaptedProcess& x);

inline double rho(const RiskMeasureSpec& spec, const AdaptedProcess& x) { return rho_eval(spec, x).value; }

/// rho applied to the martingale closure of a terminal payoff.
double static_rho(const RiskMeasureSpec& spec, const StaticRV& y);

/// max_i E[-Var(a_i) Y]; coherent specs only.
double static_rho_coherent_direct(const RiskMeasureSpec& spec, const StaticRV& y);

struct ConjugateValue {
    /// nullopt encodes +infinity (no representation of the candidate).
    std::optional<double> value;
    /// Optimal simplex weights over the generating elements when finite.
    std::vector<double> weights;

    bool infinite() const { return !value.has_value(); }
};

/// Penalty of a candidate a in D_sigma: the cheapest simplex combination of
/// generating elements reproducing a increment by increment.
ConjugateValue conjugate_value(const RiskMeasureSpec& spec, const BiMeasure& a,
                               double tol = kDefaultFeasibilityTol);

/// Negated maximizing generating elements; coherent specs only.
std::vector<BiMeasure> subgradient(const RiskMeasureSpec& spec, const AdaptedProcess& x);

struct AxiomReport {
    std::size_t samples = 0;
    double convexity = 0.0;
    double translation = 0.0;
    double monotonicity = 0.0;
    /// Only checked for coherent specs.
    std::optional<double> homogeneity;
    double rho_of_zero = 0.0;

    double worst() const;
};

/// Largest observed violation of each axiom over seeded random draws.
AxiomReport axiom_report(const RiskMeasureSpec& spec, std::size_t sample_count, std::uint64_t seed);

} // namespace scenrisk
