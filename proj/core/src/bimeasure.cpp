#include "scenrisk/bimeasure.hpp"

#include "scenrisk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace scenrisk {

BiMeasure::BiMeasure(TreePtr tree, std::vector<double> pr, std::vector<double> op)
    : tree_(std::move(tree)), pr_(std::move(pr)), op_(std::move(op)) {
    if (!tree_) throw ValidationError("BiMeasure: null tree");
    const auto n = tree_->node_count();
    if (pr_.size() != n || op_.size() != n) {
        throw ValidationError(fmt::format("BiMeasure: increment fields sized {}/{}, tree has {} nodes",
                                          pr_.size(), op_.size(), n));
    }
    for (auto leaf : tree_->nodes_at_depth(tree_->depth())) {
        if (pr_[leaf] != 0.0) {
            throw ValidationError(fmt::format("node '{}': predictable increment on a terminal node",
                                              tree_->node(leaf).id));
        }
    }
}

BiMeasure BiMeasure::zero(TreePtr tree) {
    const auto n = tree->node_count();
    return BiMeasure(std::move(tree), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0));
}

bool BiMeasure::is_positive() const {
    const auto nonneg = [](double v) { return v >= 0.0; };
    return std::all_of(pr_.begin(), pr_.end(), nonneg) && std::all_of(op_.begin(), op_.end(), nonneg);
}

BiMeasure& BiMeasure::operator+=(const BiMeasure& o) {
    require_same_tree(tree_, o.tree_);
    for (std::size_t i = 0; i < pr_.size(); ++i) {
        pr_[i] += o.pr_[i];
        op_[i] += o.op_[i];
    }
    return *this;
}

BiMeasure& BiMeasure::operator-=(const BiMeasure& o) {
    require_same_tree(tree_, o.tree_);
    for (std::size_t i = 0; i < pr_.size(); ++i) {
        pr_[i] -= o.pr_[i];
        op_[i] -= o.op_[i];
    }
    return *this;
}

BiMeasure& BiMeasure::operator*=(double s) {
    for (std::size_t i = 0; i < pr_.size(); ++i) {
        pr_[i] *= s;
        op_[i] *= s;
    }
    return *this;
}

RawBiMeasure::RawBiMeasure(TreePtr tree, std::vector<double> left, std::vector<double> right)
    : tree_(std::move(tree)), depth_(tree_ ? static_cast<std::size_t>(tree_->depth()) : 0),
      left_(std::move(left)), right_(std::move(right)) {
    if (!tree_) throw ValidationError("RawBiMeasure: null tree");
    const auto leaves = tree_->leaf_count();
    if (left_.size() != leaves * depth_ || right_.size() != leaves * (depth_ + 1)) {
        throw ValidationError("RawBiMeasure: increment arrays do not cover every (leaf, time) pair");
    }
}

RawBiMeasure RawBiMeasure::embed(const BiMeasure& a) {
    const auto& tree = *a.tree();
    const auto depth = static_cast<std::size_t>(tree.depth());
    std::vector<double> left(tree.leaf_count() * depth);
    std::vector<double> right(tree.leaf_count() * (depth + 1));
    for (LeafIndex l = 0; l < tree.leaf_count(); ++l) {
        const auto path = tree.path(l);
        for (std::size_t k = 1; k <= depth; ++k) left[l * depth + k - 1] = a.pr(path[k - 1]);
        for (std::size_t k = 0; k <= depth; ++k) right[l * (depth + 1) + k] = a.op(path[k]);
    }
    return RawBiMeasure(a.tree(), std::move(left), std::move(right));
}

double RawBiMeasure::left(LeafIndex leaf, int k) const {
    return left_[leaf * depth_ + static_cast<std::size_t>(k) - 1];
}

double RawBiMeasure::right(LeafIndex leaf, int k) const {
    return right_[leaf * (depth_ + 1) + static_cast<std::size_t>(k)];
}

double pairing(const AdaptedProcess& x, const BiMeasure& a) {
    require_same_tree(x.tree(), a.tree());
    const auto& tree = *x.tree();
    // pr(n) meets the left limit at t_{k+1}, which is X_k on n itself
    double sum = 0.0;
    for (NodeIndex n = 0; n < tree.node_count(); ++n) {
        sum += tree.node_probability(n) * x[n] * (a.pr(n) + a.op(n));
    }
    return sum;
}

double pairing(const RawProcess& z, const RawBiMeasure& a) {
    require_same_tree(z.tree(), a.tree());
    const auto& tree = *z.tree();
    const int depth = tree.depth();
    double sum = 0.0;
    for (LeafIndex l = 0; l < tree.leaf_count(); ++l) {
        double path_sum = 0.0;
        for (int k = 1; k <= depth; ++k) path_sum += z.at(l, k - 1) * a.left(l, k);
        for (int k = 0; k <= depth; ++k) path_sum += z.at(l, k) * a.right(l, k);
        sum += tree.leaf_probability(l) * path_sum;
    }
    return sum;
}

namespace {

template <class F>
StaticRV path_sum(const BiMeasure& a, F&& f) {
    const auto& tree = *a.tree();
    std::vector<double> out(tree.leaf_count(), 0.0);
    for (LeafIndex l = 0; l < out.size(); ++l) {
        double s = 0.0;
        for (auto n : tree.path(l)) s += f(a.pr(n)) + f(a.op(n));
        out[l] = s;
    }
    return StaticRV(a.tree(), std::move(out));
}

} // namespace

StaticRV variation(const BiMeasure& a) {
    return path_sum(a, [](double v) { return std::abs(v); });
}

StaticRV terminal_increment(const BiMeasure& a) {
    return path_sum(a, [](double v) { return v; });
}

double ap_norm(const BiMeasure& a, double p) {
    if (!(p >= 1.0)) {
        throw ValidationError(fmt::format("ap_norm: exponent {} < 1", p));
    }
    const auto var = variation(a);
    const auto& tree = *a.tree();
    if (std::isinf(p)) {
        return *std::max_element(var.values().begin(), var.values().end());
    }
    double sum = 0.0;
    for (LeafIndex l = 0; l < var.size(); ++l) {
        sum += tree.leaf_probability(l) * (p == 1.0 ? var[l] : std::pow(var[l], p));
    }
    return p == 1.0 ? sum : std::pow(sum, 1.0 / p);
}

std::pair<BiMeasure, BiMeasure> jordan(const BiMeasure& a) {
    const auto n = a.tree()->node_count();
    std::vector<double> pr_plus(n), pr_minus(n), op_plus(n), op_minus(n);
    for (NodeIndex i = 0; i < n; ++i) {
        pr_plus[i] = std::max(a.pr(i), 0.0);
        pr_minus[i] = std::max(-a.pr(i), 0.0);
        op_plus[i] = std::max(a.op(i), 0.0);
        op_minus[i] = std::max(-a.op(i), 0.0);
    }
    return {BiMeasure(a.tree(), std::move(pr_plus), std::move(op_plus)),
            BiMeasure(a.tree(), std::move(pr_minus), std::move(op_minus))};
}

BiMeasure dual_projection(const RawBiMeasure& raw) {
    const auto& tree = *raw.tree();
    const int depth = tree.depth();
    std::vector<double> pr(tree.node_count(), 0.0);
    std::vector<double> op(tree.node_count(), 0.0);
    std::vector<double> slice(tree.leaf_count());
    for (int k = 0; k <= depth; ++k) {
        for (LeafIndex l = 0; l < slice.size(); ++l) slice[l] = raw.right(l, k);
        const auto cond = conditional_expectations(tree, slice);
        for (auto n : tree.nodes_at_depth(k)) op[n] = cond[n];
    }
    for (int k = 1; k <= depth; ++k) {
        for (LeafIndex l = 0; l < slice.size(); ++l) slice[l] = raw.left(l, k);
        const auto cond = conditional_expectations(tree, slice);
        for (auto m : tree.nodes_at_depth(k - 1)) pr[m] = cond[m];
    }
    return BiMeasure(raw.tree(), std::move(pr), std::move(op));
}

BiMeasure normalize_to_unit(const BiMeasure& a) {
    if (!a.is_positive()) {
        throw ValidationError("normalize_to_unit: measure not in A1_+ (negative increment)");
    }
    const double norm = ap_norm(a, 1.0);
    if (!(norm > 0.0)) {
        throw ValidationError("normalize_to_unit: zero measure");
    }
    BiMeasure out = a;
    out *= 1.0 / norm;
    return out;
}

BiMeasure stopping_time_measure(const TreePtr& tree, std::span<const int> tau) {
    if (tau.size() != tree->leaf_count()) {
        throw ValidationError(fmt::format("stopping time: {} entries, tree has {} leaves", tau.size(),
                                          tree->leaf_count()));
    }
    for (LeafIndex l = 0; l < tau.size(); ++l) {
        if (tau[l] < 0 || tau[l] > tree->depth()) {
            throw ValidationError(fmt::format("stopping time: leaf '{}' stops at {} outside [0, {}]",
                                              tree->node(tree->leaf_node(l)).id, tau[l], tree->depth()));
        }
    }
    std::vector<double> op(tree->node_count(), 0.0);
    for (NodeIndex n = 0; n < tree->node_count(); ++n) {
        const int k = tree->node(n).depth;
        const auto under = tree->leaves_under(n);
        const bool stop_here = tau[under.front()] <= k;
        for (auto l : under) {
            if ((tau[l] <= k) != stop_here) {
                throw ValidationError(fmt::format(
                    "stopping time: stopping by t_{} is not decided at node '{}'", k, tree->node(n).id));
            }
        }
        if (stop_here && tau[under.front()] == k) op[n] = 1.0;
    }
    return BiMeasure(tree, std::vector<double>(tree->node_count(), 0.0), std::move(op));
}

BiMeasure terminal_density_measure(const StaticRV& f) {
    const auto& tree = *f.tree();
    for (LeafIndex l = 0; l < f.size(); ++l) {
        if (f[l] < 0.0) {
            throw ValidationError(fmt::format("density negative at leaf '{}'", tree.node(tree.leaf_node(l)).id));
        }
    }
    if (std::abs(f.expectation() - 1.0) > 1e-9) {
        throw ValidationError(fmt::format("density has mean {:.17g}, expected 1", f.expectation()));
    }
    std::vector<double> op(tree.node_count(), 0.0);
    for (LeafIndex l = 0; l < f.size(); ++l) op[tree.leaf_node(l)] = f[l];
    return BiMeasure(f.tree(), std::vector<double>(tree.node_count(), 0.0), std::move(op));
}

} // namespace scenrisk
