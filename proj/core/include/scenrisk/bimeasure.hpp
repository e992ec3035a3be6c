#pragma once

#include "scenrisk/process.hpp"

#include <limits>
#include <utility>
#include <vector>

namespace scenrisk {

/**
 * Discrete element of A^p: a predictable and an optional increment field.
 *
 * pr(n) for a depth-k node n (k < K) is the predictable jump acting at
 * t_{k+1} on every path through n; storing it on the parent makes
 * F_{t_k}-measurability structural and forces a^pr_0 = 0. op(n) is the
 * optional jump at t_k on node n, root included. Terminal nodes carry no
 * predictable entry.
 *
 * In discrete time every finite-variation path is purely discontinuous, so
 * there is no continuous part to track.
 */
class BiMeasure {
public:
    /// Both vectors are node-indexed; pr must be zero on terminal nodes.
    BiMeasure(TreePtr tree, std::vector<double> pr, std::vector<double> op);
    static BiMeasure zero(TreePtr tree);

    const TreePtr& tree() const { return tree_; }
    std::span<const double> pr() const { return pr_; }
    std::span<const double> op() const { return op_; }
    double pr(NodeIndex n) const { return pr_[n]; }
    double op(NodeIndex n) const { return op_[n]; }

    /// All increments nonnegative (element of A_+).
    bool is_positive() const;

    BiMeasure& operator+=(const BiMeasure& o);
    BiMeasure& operator-=(const BiMeasure& o);
    BiMeasure& operator*=(double s);

    friend BiMeasure operator+(BiMeasure a, const BiMeasure& b) { return a += b; }
    friend BiMeasure operator-(BiMeasure a, const BiMeasure& b) { return a -= b; }
    friend BiMeasure operator*(double s, BiMeasure a) { return a *= s; }
    friend BiMeasure operator-(BiMeasure a) { return a *= -1.0; }
    friend bool operator==(const BiMeasure& a, const BiMeasure& b) {
        return same_tree(a.tree_, b.tree_) && a.pr_ == b.pr_ && a.op_ == b.op_;
    }

private:
    TreePtr tree_;
    std::vector<double> pr_;
    std::vector<double> op_;
};

/**
 * Bi-measure over the constant filtration: increments resolved per terminal
 * scenario, not necessarily adapted. left(leaf, k) for k = 1..K acts on the
 * left limit at t_k; right(leaf, k) for k = 0..K acts on the value at t_k.
 */
class RawBiMeasure {
public:
    /// left is leaf-major with K entries per leaf (k = 1..K), right with K+1.
    RawBiMeasure(TreePtr tree, std::vector<double> left, std::vector<double> right);
    static RawBiMeasure embed(const BiMeasure& a);

    const TreePtr& tree() const { return tree_; }
    double left(LeafIndex leaf, int k) const;
    double right(LeafIndex leaf, int k) const;

private:
    TreePtr tree_;
    std::size_t depth_;
    std::vector<double> left_;
    std::vector<double> right_;
};

/// <X, a> = E[ sum_k X_{k-1} da^pr_k + sum_k X_k da^op_k ].
double pairing(const AdaptedProcess& x, const BiMeasure& a);

/// Same pairing over the constant filtration, path by path.
double pairing(const RawProcess& z, const RawBiMeasure& a);

/// Per leaf, total absolute increment mass along the path.
StaticRV variation(const BiMeasure& a);

/// Signed path sum a_T - a_0 (plus the initial optional jump).
StaticRV terminal_increment(const BiMeasure& a);

inline constexpr double kInfiniteExponent = std::numeric_limits<double>::infinity();

/// L^p norm of variation(a); p may be kInfiniteExponent. Throws for p < 1.
double ap_norm(const BiMeasure& a, double p);

/// Increment-wise Jordan decomposition a = plus - minus with both parts positive.
std::pair<BiMeasure, BiMeasure> jordan(const BiMeasure& a);

/// Dual predictable projection of the left part and dual optional projection
/// of the right part.
BiMeasure dual_projection(const RawBiMeasure& raw);

/// Scale a positive, nonzero bi-measure to unit A^1 norm.
BiMeasure normalize_to_unit(const BiMeasure& a);

/// Unit optional mass at the stopped node of each path. tau is leaf-indexed.
/// Throws unless {tau <= k} is decided by the depth-k node for every k.
BiMeasure stopping_time_measure(const TreePtr& tree, std::span<const int> tau);

/// Optional mass f(leaf) at the terminal time, for f >= 0 with E[f] = 1.
BiMeasure terminal_density_measure(const StaticRV& f);

} // namespace scenrisk
