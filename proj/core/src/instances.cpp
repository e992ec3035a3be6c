#include "scenrisk/instances.hpp"

#include "scenrisk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <map>
#include <numeric>
#include <set>

namespace scenrisk {

namespace {

/// Distinct realized values with their total probability, ascending.
std::map<double, double> atoms(const StaticRV& y) {
    std::map<double, double> out;
    for (LeafIndex l = 0; l < y.size(); ++l) out[y[l]] += y.tree()->leaf_probability(l);
    return out;
}

constexpr std::size_t kVertexCap = 250000;

} // namespace

QuantileLevel::QuantileLevel(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError(fmt::format("quantile level {} outside (0, 1)", alpha));
    }
}

double var_alpha(const StaticRV& y, QuantileLevel alpha) {
    const auto a = atoms(y);
    double cum = 0.0;
    for (const auto& [x, p] : a) {
        cum += p;
        if (cum > alpha.value()) return -x;
    }
    // only reachable when rounding leaves the total mass at or below alpha
    return -a.rbegin()->first;
}

double es_tce(const StaticRV& y, QuantileLevel alpha) {
    const double threshold = -var_alpha(y, alpha);
    double mass = 0.0, sum = 0.0;
    for (LeafIndex l = 0; l < y.size(); ++l) {
        if (y[l] < threshold) {
            const double p = y.tree()->leaf_probability(l);
            mass += p;
            sum += p * y[l];
        }
    }
    if (mass == 0.0) {
        throw UndefinedError(fmt::format("undefined TCE: no outcome below {} at alpha {}", threshold, alpha.value()));
    }
    return sum / mass;
}

double avar(const StaticRV& y, QuantileLevel alpha) {
    // Candidate t = -x_k; the loss -x - t is positive exactly on the atoms
    // below x_k, so the tail is x_k P(Y < x_k) - E[Y; Y < x_k].
    double best = std::numeric_limits<double>::infinity();
    double mass_below = 0.0, sum_below = 0.0;
    for (const auto& [x, p] : atoms(y)) {
        const double tail = x * mass_below - sum_below;
        best = std::min(best, -x + std::max(tail, 0.0) / alpha.value());
        mass_below += p;
        sum_below += p * x;
    }
    return best;
}

StaticRV avar_maximizing_density(const StaticRV& y, QuantileLevel alpha) {
    const auto& tree = *y.tree();
    std::vector<LeafIndex> order(y.size());
    std::iota(order.begin(), order.end(), LeafIndex{0});
    std::stable_sort(order.begin(), order.end(), [&](LeafIndex a, LeafIndex b) { return y[a] < y[b]; });

    const double cap = 1.0 / alpha.value();
    std::vector<double> f(y.size(), 0.0);
    double remaining = 1.0;
    for (auto l : order) {
        if (remaining <= 0.0) break;
        const double p = tree.leaf_probability(l);
        f[l] = std::min(cap, remaining / p);
        remaining -= p * f[l];
    }
    return StaticRV(y.tree(), std::move(f));
}

RiskMeasureSpec avar_spec(const TreePtr& tree, QuantileLevel alpha, std::size_t leaf_cap) {
    const std::size_t n = tree->leaf_count();
    if (n > leaf_cap) {
        throw ValidationError(fmt::format("avar_spec: {} leaves exceed the enumeration cap {}", n, leaf_cap));
    }
    const double cap = 1.0 / alpha.value();
    constexpr double eps = 1e-12;

    // vertices of {0 <= f <= cap, E f = 1}: every coordinate at a bound except
    // possibly one
    std::vector<std::vector<double>> vertices;
    std::vector<double> f(n, 0.0);
    std::optional<std::size_t> frac;
    auto dfs = [&](auto&& self, std::size_t i, double mass) -> void {
        if (mass > 1.0 + eps) return;
        if (i == n) {
            if (frac) {
                const double v = (1.0 - mass) / tree->leaf_probability(*frac);
                if (v > eps * cap && v < cap * (1.0 - eps)) {
                    f[*frac] = v;
                    vertices.push_back(f);
                    f[*frac] = 0.0;
                }
            } else if (std::abs(mass - 1.0) <= eps) {
                vertices.push_back(f);
            }
            if (vertices.size() > kVertexCap) {
                throw ValidationError("avar_spec: vertex count exceeds the enumeration limit");
            }
            return;
        }
        const double p = tree->leaf_probability(i);
        self(self, i + 1, mass);
        f[i] = cap;
        self(self, i + 1, mass + p * cap);
        f[i] = 0.0;
        if (!frac) {
            frac = i;
            self(self, i + 1, mass);
            frac.reset();
        }
    };
    dfs(dfs, 0, 0.0);

    std::vector<SpecElement> elems;
    elems.reserve(vertices.size());
    for (std::size_t v = 0; v < vertices.size(); ++v) {
        StaticRV density(tree, std::move(vertices[v]));
        // absorb rounding in the unit mass before embedding
        density *= 1.0 / density.expectation();
        elems.push_back({terminal_density_measure(density), 0.0, fmt::format("avar_v{}", v)});
    }
    return RiskMeasureSpec(tree, std::move(elems));
}

RiskMeasureSpec avar_support_spec(const TreePtr& tree, QuantileLevel alpha, const std::vector<StaticRV>& payoffs) {
    if (payoffs.empty()) {
        throw ValidationError("avar_support_spec: no payoffs");
    }
    std::set<std::vector<double>> seen;
    std::vector<SpecElement> elems;
    for (const auto& y : payoffs) {
        require_same_tree(tree, y.tree());
        auto f = avar_maximizing_density(y, alpha);
        std::vector<double> key(f.values().begin(), f.values().end());
        if (!seen.insert(key).second) continue;
        elems.push_back({terminal_density_measure(f), 0.0, fmt::format("avar_max{}", elems.size())});
    }
    return RiskMeasureSpec(tree, std::move(elems));
}

RiskMeasureSpec worst_case_spec(const TreePtr& tree) {
    std::vector<SpecElement> elems;
    elems.reserve(tree->leaf_count());
    for (LeafIndex l = 0; l < tree->leaf_count(); ++l) {
        std::vector<double> f(tree->leaf_count(), 0.0);
        f[l] = 1.0 / tree->leaf_probability(l);
        elems.push_back({terminal_density_measure(StaticRV(tree, std::move(f))), 0.0,
                         "a_" + tree->node(tree->leaf_node(l)).id});
    }
    return RiskMeasureSpec(tree, std::move(elems));
}

double entropic(const StaticRV& y, double beta) {
    if (!(beta > 0.0)) {
        throw ValidationError(fmt::format("entropic: beta must be > 0, got {}", beta));
    }
    double shift = -std::numeric_limits<double>::infinity();
    for (auto v : y.values()) shift = std::max(shift, -beta * v);
    double acc = 0.0;
    for (LeafIndex l = 0; l < y.size(); ++l) {
        acc += y.tree()->leaf_probability(l) * std::exp(-beta * y[l] - shift);
    }
    return (shift + std::log(acc)) / beta;
}

StoppingResult stopped_worst_case(const AdaptedProcess& x) {
    const auto& tree = *x.tree();
    std::vector<double> value(tree.node_count());
    std::vector<bool> stop(tree.node_count(), true);
    for (auto n : tree.nodes_at_depth(tree.depth())) value[n] = -x[n];
    for (int d = tree.depth() - 1; d >= 0; --d) {
        for (auto n : tree.nodes_at_depth(d)) {
            double cont = 0.0;
            for (auto c : tree.node(n).children) cont += tree.node(c).branch_prob * value[c];
            stop[n] = -x[n] >= cont;
            value[n] = stop[n] ? -x[n] : cont;
        }
    }
    StoppingResult out;
    out.value = value[tree.root()];
    out.tau.resize(tree.leaf_count());
    for (LeafIndex l = 0; l < tree.leaf_count(); ++l) {
        for (auto n : tree.path(l)) {
            if (stop[n]) {
                out.tau[l] = tree.node(n).depth;
                break;
            }
        }
    }
    return out;
}

} // namespace scenrisk
