#include "scenrisk/process.hpp"

#include "scenrisk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace scenrisk {

namespace {

void check_size(const TreePtr& tree, std::size_t got, std::size_t want, const char* what) {
    if (!tree) {
        throw ValidationError(fmt::format("{}: null tree", what));
    }
    if (got != want) {
        throw ValidationError(fmt::format("{}: {} values given, tree needs {}", what, got, want));
    }
}

} // namespace

// StaticRV

StaticRV::StaticRV(TreePtr tree, std::vector<double> leaf_values)
    : tree_(std::move(tree)), values_(std::move(leaf_values)) {
    check_size(tree_, values_.size(), tree_ ? tree_->leaf_count() : 0, "StaticRV");
}

StaticRV StaticRV::constant(TreePtr tree, double c) {
    const auto n = tree->leaf_count();
    return StaticRV(std::move(tree), std::vector<double>(n, c));
}

double StaticRV::expectation() const {
    double sum = 0.0;
    for (LeafIndex l = 0; l < values_.size(); ++l) {
        sum += tree_->leaf_probability(l) * values_[l];
    }
    return sum;
}

StaticRV& StaticRV::operator+=(const StaticRV& o) {
    require_same_tree(tree_, o.tree_);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

StaticRV& StaticRV::operator-=(const StaticRV& o) {
    require_same_tree(tree_, o.tree_);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

StaticRV& StaticRV::operator*=(double s) {
    for (auto& v : values_) v *= s;
    return *this;
}

double expectation_of_product(const StaticRV& a, const StaticRV& b) {
    require_same_tree(a.tree(), b.tree());
    const auto& tree = *a.tree();
    double sum = 0.0;
    for (LeafIndex l = 0; l < a.size(); ++l) {
        sum += tree.leaf_probability(l) * a[l] * b[l];
    }
    return sum;
}

// AdaptedProcess

AdaptedProcess::AdaptedProcess(TreePtr tree, std::vector<double> node_values)
    : tree_(std::move(tree)), values_(std::move(node_values)) {
    check_size(tree_, values_.size(), tree_ ? tree_->node_count() : 0, "AdaptedProcess");
}

AdaptedProcess AdaptedProcess::constant(TreePtr tree, double c) {
    const auto n = tree->node_count();
    return AdaptedProcess(std::move(tree), std::vector<double>(n, c));
}

AdaptedProcess AdaptedProcess::terminal_payoff(const StaticRV& payoff) {
    const auto& tree = *payoff.tree();
    std::vector<double> v(tree.node_count(), 0.0);
    for (LeafIndex l = 0; l < tree.leaf_count(); ++l) {
        v[tree.leaf_node(l)] = payoff[l];
    }
    return AdaptedProcess(payoff.tree(), std::move(v));
}

double AdaptedProcess::left_value(NodeIndex n) const {
    const auto& parent = tree_->node(n).parent;
    return parent ? values_[*parent] : values_[n];
}

StaticRV AdaptedProcess::terminal() const {
    std::vector<double> v(tree_->leaf_count());
    for (LeafIndex l = 0; l < v.size(); ++l) v[l] = values_[tree_->leaf_node(l)];
    return StaticRV(tree_, std::move(v));
}

AdaptedProcess& AdaptedProcess::operator+=(const AdaptedProcess& o) {
    require_same_tree(tree_, o.tree_);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

AdaptedProcess& AdaptedProcess::operator-=(const AdaptedProcess& o) {
    require_same_tree(tree_, o.tree_);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

AdaptedProcess& AdaptedProcess::operator*=(double s) {
    for (auto& v : values_) v *= s;
    return *this;
}

AdaptedProcess& AdaptedProcess::operator+=(double m) {
    for (auto& v : values_) v += m;
    return *this;
}

bool pointwise_leq(const AdaptedProcess& x, const AdaptedProcess& y) {
    require_same_tree(x.tree(), y.tree());
    for (std::size_t i = 0; i < x.values().size(); ++i) {
        if (x.values()[i] > y.values()[i]) return false;
    }
    return true;
}

// RawProcess

RawProcess::RawProcess(TreePtr tree, std::vector<double> values)
    : tree_(std::move(tree)), width_(tree_ ? static_cast<std::size_t>(tree_->depth()) + 1 : 0),
      values_(std::move(values)) {
    check_size(tree_, values_.size(), tree_ ? tree_->leaf_count() * width_ : 0, "RawProcess");
}

RawProcess RawProcess::embed(const AdaptedProcess& x) {
    const auto& tree = *x.tree();
    const auto width = static_cast<std::size_t>(tree.depth()) + 1;
    std::vector<double> v(tree.leaf_count() * width);
    for (LeafIndex l = 0; l < tree.leaf_count(); ++l) {
        const auto path = tree.path(l);
        for (std::size_t k = 0; k < width; ++k) v[l * width + k] = x[path[k]];
    }
    return RawProcess(x.tree(), std::move(v));
}

RawProcess RawProcess::constant_in_time(const StaticRV& y) {
    const auto& tree = *y.tree();
    const auto width = static_cast<std::size_t>(tree.depth()) + 1;
    std::vector<double> v(tree.leaf_count() * width);
    for (LeafIndex l = 0; l < tree.leaf_count(); ++l) {
        std::fill_n(v.begin() + static_cast<std::ptrdiff_t>(l * width), width, y[l]);
    }
    return RawProcess(y.tree(), std::move(v));
}

// operations

StaticRV running_sup(const AdaptedProcess& x) {
    const auto& tree = *x.tree();
    std::vector<double> out(tree.leaf_count(), 0.0);
    for (LeafIndex l = 0; l < out.size(); ++l) {
        for (auto n : tree.path(l)) out[l] = std::max(out[l], std::abs(x[n]));
    }
    return StaticRV(x.tree(), std::move(out));
}

double sup_norm(const AdaptedProcess& x) {
    const auto s = running_sup(x);
    return *std::max_element(s.values().begin(), s.values().end());
}

std::vector<double> conditional_expectations(const ScenarioTree& tree, std::span<const double> leaf_values) {
    std::vector<double> m(tree.node_count(), 0.0);
    for (LeafIndex l = 0; l < tree.leaf_count(); ++l) m[tree.leaf_node(l)] = leaf_values[l];
    for (int d = tree.depth() - 1; d >= 0; --d) {
        for (auto n : tree.nodes_at_depth(d)) {
            const auto& children = tree.node(n).children;
            // centred on the first child so constant input is reproduced bit-exactly
            const double ref = m[children.front()];
            double acc = 0.0;
            for (auto c : children) acc += tree.node(c).branch_prob * (m[c] - ref);
            m[n] = ref + acc;
        }
    }
    return m;
}

AdaptedProcess optional_projection_static(const StaticRV& y) {
    return AdaptedProcess(y.tree(), conditional_expectations(*y.tree(), y.values()));
}

namespace {

/// E[Z_k | n] for every node n at depth <= k.
std::vector<double> condition_time_slice(const RawProcess& z, int k) {
    const auto& tree = *z.tree();
    std::vector<double> slice(tree.leaf_count());
    for (LeafIndex l = 0; l < slice.size(); ++l) slice[l] = z.at(l, k);
    return conditional_expectations(tree, slice);
}

} // namespace

AdaptedProcess optional_projection_raw(const RawProcess& z) {
    const auto& tree = *z.tree();
    std::vector<double> out(tree.node_count(), 0.0);
    for (int k = 0; k <= tree.depth(); ++k) {
        const auto cond = condition_time_slice(z, k);
        for (auto n : tree.nodes_at_depth(k)) out[n] = cond[n];
    }
    return AdaptedProcess(z.tree(), std::move(out));
}

AdaptedProcess predictable_projection_raw(const RawProcess& z) {
    const auto& tree = *z.tree();
    std::vector<double> out(tree.node_count(), 0.0);
    for (int k = 0; k <= tree.depth(); ++k) {
        const auto cond = condition_time_slice(z, k);
        for (auto n : tree.nodes_at_depth(k)) {
            const auto& parent = tree.node(n).parent;
            out[n] = parent ? cond[*parent] : cond[n];
        }
    }
    return AdaptedProcess(z.tree(), std::move(out));
}

double prob_sup_exceedance(const AdaptedProcess& x, const AdaptedProcess& y, double eps) {
    if (!(eps > 0.0)) {
        throw ValidationError(fmt::format("prob_sup_exceedance: eps must be > 0, got {}", eps));
    }
    require_same_tree(x.tree(), y.tree());
    const auto s = running_sup(x - y);
    const auto& tree = *x.tree();
    double mass = 0.0;
    for (LeafIndex l = 0; l < s.size(); ++l) {
        if (s[l] > eps) mass += tree.leaf_probability(l);
    }
    return mass;
}

} // namespace scenrisk
