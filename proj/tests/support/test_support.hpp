#pragma once

// Fixtures, random generators and independent oracles shared by the unit
// and acceptance suites. Oracles here recompute quantities by a different
// route (path-wise expansion, enumeration) and never call the routine they
// check.

#include "scenrisk/scenrisk.hpp"

#include <functional>
#include <string>
#include <vector>

namespace scenrisk::testing {

/// root -> {u, d}, each 1/2, times 0 and 1.
TreePtr tree_t1();

/// root -> three children with probabilities 0.1 / 0.6 / 0.3 ("a", "b", "c").
TreePtr tree_three_atoms();

/// Chain root -> c1 -> c2 ... of the given depth, every branch probability 1.
TreePtr chain_tree(int depth);

/// Every leaf at exactly `depth`; each internal node has 1..max_branch
/// children. With dyadic = true all branch probabilities are multiples of
/// 1/4 (or 1/2, 1) so sums of dyadic data stay exact.
TreePtr random_tree(Rng& rng, int depth, int max_branch, bool dyadic = false);

/// Process by node id (missing ids default to 0).
AdaptedProcess process_of(const TreePtr& tree, const std::vector<std::pair<std::string, double>>& values);
/// Leaf variable by leaf id.
StaticRV static_of(const TreePtr& tree, const std::vector<std::pair<std::string, double>>& values);

AdaptedProcess random_process(const TreePtr& tree, Rng& rng, double scale = 1.0);
/// Integer-valued process in [-range, range].
AdaptedProcess random_integer_process(const TreePtr& tree, Rng& rng, int range);
StaticRV random_static(const TreePtr& tree, Rng& rng, double scale = 1.0);
RawProcess random_raw_process(const TreePtr& tree, Rng& rng);
RawBiMeasure random_raw_bimeasure(const TreePtr& tree, Rng& rng);
/// Signed increments; roughly `zero_share` of the entries are zero.
BiMeasure random_signed_bimeasure(const TreePtr& tree, Rng& rng, double zero_share = 0.3);
BiMeasure random_positive_bimeasure(const TreePtr& tree, Rng& rng, double zero_share = 0.3);
/// Positive and normalized to unit A1 norm.
BiMeasure random_scenario(const TreePtr& tree, Rng& rng);

/// n random D_sigma elements with penalties drawn from [0, gamma_max]
/// (gamma_max = 0 gives a coherent spec).
RiskMeasureSpec random_spec(const TreePtr& tree, Rng& rng, std::size_t n, double gamma_max);

/// Unit optional mass 1/p(leaf) at one terminal node.
BiMeasure dirac_leaf(const TreePtr& tree, const std::string& leaf_id);

// --- oracles -------------------------------------------------------------

/// <X, a> by expanding (X|a) leaf by leaf along each path.
double pairing_by_paths(const AdaptedProcess& x, const BiMeasure& a);

/// E[Y | node] as the probability-weighted average over leaves below the node.
double leaf_average(const StaticRV& y, NodeIndex node);

/// Every stopping time of the tree as a leaf-indexed depth vector.
std::vector<std::vector<int>> all_stopping_times(const ScenarioTree& tree);

/// max over all stopping times of E[-X_tau], computed leaf by leaf.
double stopping_enumeration_value(const AdaptedProcess& x);

/// avar through its dual: greedy density 1/alpha on the worst outcomes.
double avar_dual_greedy(const StaticRV& y, double alpha);

} // namespace scenrisk::testing
