#pragma once

#include "scenrisk/instances.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace scenrisk {

// ---------------------------------------------------------------------------
// Uniform integrability

struct UIReport {
    std::vector<double> thresholds;
    /// eta(K) = sup over the family of E[|f| 1{|f| > K}].
    std::vector<double> eta;
    double decay_threshold = 1e-6;
    /// eta at the largest threshold falls below decay_threshold.
    bool decaying = false;
};

/// Exact atom-by-atom tail masses. K_grid must be nonnegative and
/// strictly increasing; the family must be nonempty.
UIReport ui_modulus(const std::vector<StaticRV>& family, const std::vector<double>& k_grid,
                    double decay_threshold = 1e-6);

/// eta at a single threshold.
double ui_eta(const std::vector<StaticRV>& family, double k);

// ---------------------------------------------------------------------------
// Lebesgue probe along refinements

struct SequencePoint {
    AdaptedProcess x_n;
    AdaptedProcess x_limit;
};

/**
 * A family of risk measures and a convergent sequence, both rebuilt at each
 * refinement depth. A single finite tree always satisfies the Lebesgue
 * property, so the probe only reads trends across depths.
 */
struct RefinementSchedule {
    std::string name;
    std::vector<int> depths;
    std::function<TreePtr(int)> tree_builder = [](int d) { return ScenarioTree::uniform_binomial(d); };
    std::function<SequencePoint(const TreePtr&, int)> sequence_builder;
    std::function<RiskMeasureSpec(const TreePtr&, int, const SequencePoint&)> family_builder;
};

struct ProbeConfig {
    double eps = 0.5;                 ///< exceedance level for (X_n - X)* > eps
    double ui_reference_k = 16.0;     ///< threshold at which eta is tracked
    double ui_decay_threshold = 1e-6;
    double violating_gap = 0.5;       ///< gap kept above this over the last rows
    std::size_t sustained_rows = 3;
    double consistent_factor = 10.0;  ///< gap <= factor * 2^-depth counts as vanishing
};

struct ProbeRow {
    int depth = 0;
    std::size_t leaves = 0;
    std::size_t family_size = 0;
    double rho_n = 0.0;
    double rho_limit = 0.0;
    double gap = 0.0;
    double exceedance = 0.0;
    double ui_eta = 0.0;
};

enum class ProbeVerdict { Consistent, Violating, Inconclusive, InvalidSchedule };

const char* to_string(ProbeVerdict v);

struct LebesgueReport {
    std::string schedule;
    ProbeConfig config;
    std::vector<ProbeRow> rows;
    bool schedule_valid = true;
    ProbeVerdict verdict = ProbeVerdict::Inconclusive;
    /// Heuristic finite-scale reading, stated in every report.
    std::string note;
};

LebesgueReport lebesgue_probe(const RefinementSchedule& schedule, const ProbeConfig& config = {});

/// X_n = terminal payoff -1 on the first leaf, X = 0.
SequencePoint single_leaf_loss(const TreePtr& tree, int depth);

RefinementSchedule worst_case_schedule(std::vector<int> depths);
/// Full vertex family up to the enumeration cap, maximizing-density family above it.
RefinementSchedule avar_schedule(std::vector<int> depths, QuantileLevel alpha);

// ---------------------------------------------------------------------------
// Variation / terminal-increment identities

struct IdentityCheck {
    bool increment_bound = false;   ///< |a_T - a_0| <= Var(a) on every leaf
    bool variation_additive = false; ///< Var(a) = Var(a+) + Var(a-)
    bool terminal_split = false;    ///< a_T - a_0 = Var(a+) - Var(a-)
    bool strict_somewhere = false;  ///< |a_T - a_0| < Var(a) on some leaf
    bool var_within_2c = false;     ///< Var(a) <= 2 |a_T - a_0| on every leaf
    bool positive_part_match = false; ///< (a_T - a_0)^+ = Var(a+) on every leaf

    bool identities_hold() const { return increment_bound && variation_additive && terminal_split; }
};

struct IdentityReport {
    std::vector<IdentityCheck> elements;
    std::size_t passing = 0;
    double sup_variation = 0.0;  ///< max over A of sup-norm of Var(a)
    double sup_terminal = 0.0;   ///< max over A of sup-norm of |a_T - a_0|
    /// Set-level relations, recorded only (they hold as inequalities pointwise).
    bool c_within_2var = false;
    bool var_within_2c = false;
    bool positive_parts_match = false;
};

/// Identities evaluated in exact rational arithmetic on the increments.
IdentityReport identity_battery(const std::vector<BiMeasure>& family);

// ---------------------------------------------------------------------------
// Attainment

struct Attainment {
    double value = 0.0;
    std::vector<std::size_t> maximizers;
    /// Gap between the best and second-best score; nullopt for a singleton
    /// family (no runner-up).
    std::optional<double> margin;
};

std::vector<Attainment> attainment_check(const RiskMeasureSpec& spec, const std::vector<AdaptedProcess>& xs);

} // namespace scenrisk
