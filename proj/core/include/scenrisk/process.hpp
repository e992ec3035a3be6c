#pragma once

#include "scenrisk/scenario.hpp"

#include <span>
#include <vector>

namespace scenrisk {

/**
 * Leaf-indexed random variable on the terminal sigma-algebra.
 *
 * Used both for bounded payoffs and for densities (dQ/dP and variations of
 * bi-measures).
 */
class StaticRV {
public:
    StaticRV(TreePtr tree, std::vector<double> leaf_values);
    static StaticRV constant(TreePtr tree, double c);

    const TreePtr& tree() const { return tree_; }
    std::span<const double> values() const { return values_; }
    double operator[](LeafIndex l) const { return values_[l]; }
    double& operator[](LeafIndex l) { return values_[l]; }
    std::size_t size() const { return values_.size(); }

    double expectation() const;

    StaticRV& operator+=(const StaticRV& o);
    StaticRV& operator-=(const StaticRV& o);
    StaticRV& operator*=(double s);

    friend StaticRV operator+(StaticRV a, const StaticRV& b) { return a += b; }
    friend StaticRV operator-(StaticRV a, const StaticRV& b) { return a -= b; }
    friend StaticRV operator*(double s, StaticRV a) { return a *= s; }
    friend StaticRV operator*(StaticRV a, double s) { return a *= s; }
    friend bool operator==(const StaticRV& a, const StaticRV& b) {
        return same_tree(a.tree_, b.tree_) && a.values_ == b.values_;
    }

private:
    TreePtr tree_;
    std::vector<double> values_;
};

/// E[a * b] under the leaf measure.
double expectation_of_product(const StaticRV& a, const StaticRV& b);

/**
 * Adapted process: one value per node, so the time-k value is measurable
 * with respect to the depth-k partition by construction.
 *
 * The process is embedded as a piecewise-constant right-continuous path:
 * X_t = X_k on [t_k, t_{k+1}); the left limit at t_k is the parent value
 * and at t_0 the root value itself.
 */
class AdaptedProcess {
public:
    AdaptedProcess(TreePtr tree, std::vector<double> node_values);
    static AdaptedProcess constant(TreePtr tree, double c);
    /// X_k = 0 for k < K and X_K = payoff.
    static AdaptedProcess terminal_payoff(const StaticRV& payoff);

    const TreePtr& tree() const { return tree_; }
    std::span<const double> values() const { return values_; }
    double operator[](NodeIndex n) const { return values_[n]; }
    double& operator[](NodeIndex n) { return values_[n]; }

    /// X_{t_k-}: parent value, or the root value at the root.
    double left_value(NodeIndex n) const;
    /// X_K as a random variable.
    StaticRV terminal() const;

    AdaptedProcess& operator+=(const AdaptedProcess& o);
    AdaptedProcess& operator-=(const AdaptedProcess& o);
    AdaptedProcess& operator*=(double s);
    /// Shift by a deterministic amount m (X + m*1).
    AdaptedProcess& operator+=(double m);

    friend AdaptedProcess operator+(AdaptedProcess a, const AdaptedProcess& b) { return a += b; }
    friend AdaptedProcess operator-(AdaptedProcess a, const AdaptedProcess& b) { return a -= b; }
    friend AdaptedProcess operator*(double s, AdaptedProcess a) { return a *= s; }
    friend AdaptedProcess operator+(AdaptedProcess a, double m) { return a += m; }
    friend bool operator==(const AdaptedProcess& a, const AdaptedProcess& b) {
        return same_tree(a.tree_, b.tree_) && a.values_ == b.values_;
    }

private:
    TreePtr tree_;
    std::vector<double> values_;
};

/// Node-wise X <= Y.
bool pointwise_leq(const AdaptedProcess& x, const AdaptedProcess& y);

/**
 * Process over the constant filtration: its time-k value may depend on the
 * whole terminal scenario. Stored per (leaf, depth), redundant entries
 * included, so genuinely non-adapted inputs can be expressed.
 */
class RawProcess {
public:
    /// values is leaf-major: values[leaf * (K+1) + k].
    RawProcess(TreePtr tree, std::vector<double> values);
    static RawProcess embed(const AdaptedProcess& x);
    /// The constant-in-time process Z_k = Y for every k.
    static RawProcess constant_in_time(const StaticRV& y);

    const TreePtr& tree() const { return tree_; }
    double at(LeafIndex leaf, int k) const { return values_[leaf * width_ + static_cast<std::size_t>(k)]; }
    double& at(LeafIndex leaf, int k) { return values_[leaf * width_ + static_cast<std::size_t>(k)]; }
    std::span<const double> values() const { return values_; }

private:
    TreePtr tree_;
    std::size_t width_;
    std::vector<double> values_;
};

/// Per leaf, max of |X_k| along its path.
StaticRV running_sup(const AdaptedProcess& x);

/// Max of running_sup over leaves.
double sup_norm(const AdaptedProcess& x);

/// Conditional expectation of a terminal variable at every node, evaluated
/// bottom-up through branch probabilities. Input that is constant below a
/// node is reproduced exactly at that node.
std::vector<double> conditional_expectations(const ScenarioTree& tree, std::span<const double> leaf_values);

/// The martingale M_k = E[Y | F_k]; M_K = Y.
AdaptedProcess optional_projection_static(const StaticRV& y);

/// Value at depth-k node n is E[Z_k | n].
AdaptedProcess optional_projection_raw(const RawProcess& z);

/// Value at depth-k node with parent m is E[Z_k | m]; E[Z_0] at the root.
AdaptedProcess predictable_projection_raw(const RawProcess& z);

/// P[(X - Y)* > eps]. Throws ValidationError for eps <= 0 or a tree mismatch.
double prob_sup_exceedance(const AdaptedProcess& x, const AdaptedProcess& y, double eps);

} // namespace scenrisk
