#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace scenrisk::testing {

TreePtr tree_t1() {
    return ScenarioTree::build({
        {"root", std::nullopt, 1.0, 0.0},
        {"u", "root", 0.5, 1.0},
        {"d", "root", 0.5, 1.0},
    });
}

TreePtr tree_three_atoms() {
    return ScenarioTree::build({
        {"root", std::nullopt, 1.0, 0.0},
        {"a", "root", 0.1, 1.0},
        {"b", "root", 0.6, 1.0},
        {"c", "root", 0.3, 1.0},
    });
}

TreePtr chain_tree(int depth) {
    std::vector<NodeSpec> spec{{"root", std::nullopt, 1.0, 0.0}};
    std::string parent = "root";
    for (int k = 1; k <= depth; ++k) {
        const auto id = "c" + std::to_string(k);
        spec.push_back({id, parent, 1.0, static_cast<double>(k)});
        parent = id;
    }
    return ScenarioTree::build(std::move(spec));
}

TreePtr random_tree(Rng& rng, int depth, int max_branch, bool dyadic) {
    std::vector<NodeSpec> spec{{"root", std::nullopt, 1.0, 0.0}};
    std::vector<std::string> level{"root"};
    for (int k = 1; k <= depth; ++k) {
        std::vector<std::string> next;
        for (const auto& parent : level) {
            const int b = rng.integer(1, max_branch);
            std::vector<double> p(static_cast<std::size_t>(b));
            if (dyadic) {
                if (b == 1) p = {1.0};
                else if (b == 2) p = rng.uniform() < 0.5 ? std::vector<double>{0.5, 0.5} : std::vector<double>{0.25, 0.75};
                else p = {0.25, 0.25, 0.5};
            } else {
                double total = 0.0;
                for (auto& v : p) total += (v = rng.uniform(0.1, 1.0));
                double rest = 1.0;
                for (std::size_t i = 0; i + 1 < p.size(); ++i) rest -= (p[i] /= total);
                p.back() = rest;
            }
            for (int c = 0; c < b; ++c) {
                auto id = parent == "root" ? std::string(1, static_cast<char>('a' + c))
                                           : parent + static_cast<char>('a' + c);
                spec.push_back({id, parent, p[static_cast<std::size_t>(c)], static_cast<double>(k)});
                next.push_back(std::move(id));
            }
        }
        level = std::move(next);
    }
    return ScenarioTree::build(std::move(spec));
}

AdaptedProcess process_of(const TreePtr& tree, const std::vector<std::pair<std::string, double>>& values) {
    auto x = AdaptedProcess::constant(tree, 0.0);
    for (const auto& [id, v] : values) x[tree->index_of(id)] = v;
    return x;
}

StaticRV static_of(const TreePtr& tree, const std::vector<std::pair<std::string, double>>& values) {
    auto y = StaticRV::constant(tree, 0.0);
    for (const auto& [id, v] : values) y[tree->leaf_index(tree->index_of(id))] = v;
    return y;
}

AdaptedProcess random_process(const TreePtr& tree, Rng& rng, double scale) {
    std::vector<double> v(tree->node_count());
    for (auto& x : v) x = rng.uniform(-scale, scale);
    return AdaptedProcess(tree, std::move(v));
}

AdaptedProcess random_integer_process(const TreePtr& tree, Rng& rng, int range) {
    std::vector<double> v(tree->node_count());
    for (auto& x : v) x = rng.integer(-range, range);
    return AdaptedProcess(tree, std::move(v));
}

StaticRV random_static(const TreePtr& tree, Rng& rng, double scale) {
    std::vector<double> v(tree->leaf_count());
    for (auto& x : v) x = rng.uniform(-scale, scale);
    return StaticRV(tree, std::move(v));
}

RawProcess random_raw_process(const TreePtr& tree, Rng& rng) {
    std::vector<double> v(tree->leaf_count() * static_cast<std::size_t>(tree->depth() + 1));
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    return RawProcess(tree, std::move(v));
}

RawBiMeasure random_raw_bimeasure(const TreePtr& tree, Rng& rng) {
    const auto k = static_cast<std::size_t>(tree->depth());
    std::vector<double> left(tree->leaf_count() * k), right(tree->leaf_count() * (k + 1));
    for (auto& x : left) x = rng.uniform(-1.0, 1.0);
    for (auto& x : right) x = rng.uniform(-1.0, 1.0);
    return RawBiMeasure(tree, std::move(left), std::move(right));
}

namespace {

BiMeasure random_bimeasure(const TreePtr& tree, Rng& rng, double zero_share, double lo) {
    std::vector<double> pr(tree->node_count(), 0.0), op(tree->node_count(), 0.0);
    for (NodeIndex n = 0; n < tree->node_count(); ++n) {
        if (!tree->is_leaf(n) && rng.uniform() >= zero_share) pr[n] = rng.uniform(lo, 1.0);
        if (rng.uniform() >= zero_share) op[n] = rng.uniform(lo, 1.0);
    }
    return BiMeasure(tree, std::move(pr), std::move(op));
}

} // namespace

BiMeasure random_signed_bimeasure(const TreePtr& tree, Rng& rng, double zero_share) {
    return random_bimeasure(tree, rng, zero_share, -1.0);
}

BiMeasure random_positive_bimeasure(const TreePtr& tree, Rng& rng, double zero_share) {
    return random_bimeasure(tree, rng, zero_share, 0.0);
}

BiMeasure random_scenario(const TreePtr& tree, Rng& rng) {
    for (;;) {
        auto a = random_positive_bimeasure(tree, rng, 0.5);
        if (ap_norm(a, 1.0) > 1e-3) return normalize_to_unit(a);
    }
}

RiskMeasureSpec random_spec(const TreePtr& tree, Rng& rng, std::size_t n, double gamma_max) {
    std::vector<SpecElement> elems;
    for (std::size_t i = 0; i < n; ++i) {
        elems.push_back({random_scenario(tree, rng), gamma_max > 0.0 ? rng.uniform(0.0, gamma_max) : 0.0, ""});
    }
    return RiskMeasureSpec(tree, std::move(elems));
}

BiMeasure dirac_leaf(const TreePtr& tree, const std::string& leaf_id) {
    const auto n = tree->index_of(leaf_id);
    std::vector<double> op(tree->node_count(), 0.0);
    op[n] = 1.0 / tree->node_probability(n);
    return BiMeasure(tree, std::vector<double>(tree->node_count(), 0.0), std::move(op));
}

double pairing_by_paths(const AdaptedProcess& x, const BiMeasure& a) {
    const auto& tree = *x.tree();
    double total = 0.0;
    for (LeafIndex l = 0; l < tree.leaf_count(); ++l) {
        const auto path = tree.path(l);
        double s = 0.0;
        for (std::size_t k = 0; k < path.size(); ++k) {
            // predictable jump at t_k was fixed at t_{k-1} and meets X_{t_k-} = X_{k-1}
            if (k >= 1) s += x[path[k - 1]] * a.pr(path[k - 1]);
            s += x[path[k]] * a.op(path[k]);
        }
        total += tree.leaf_probability(l) * s;
    }
    return total;
}

double leaf_average(const StaticRV& y, NodeIndex node) {
    const auto& tree = *y.tree();
    double num = 0.0, den = 0.0;
    for (auto l : tree.leaves_under(node)) {
        num += tree.leaf_probability(l) * y[l];
        den += tree.leaf_probability(l);
    }
    return num / den;
}

namespace {

using Assignment = std::map<LeafIndex, int>;

std::vector<Assignment> stopping_options(const ScenarioTree& tree, NodeIndex n) {
    Assignment stop_here;
    for (auto l : tree.leaves_under(n)) stop_here[l] = tree.node(n).depth;
    std::vector<Assignment> out{stop_here};
    if (tree.is_leaf(n)) return out;
    std::vector<Assignment> combos{Assignment{}};
    for (auto c : tree.node(n).children) {
        const auto sub = stopping_options(tree, c);
        std::vector<Assignment> next;
        for (const auto& base : combos) {
            for (const auto& s : sub) {
                auto merged = base;
                merged.insert(s.begin(), s.end());
                next.push_back(std::move(merged));
            }
        }
        combos = std::move(next);
    }
    out.insert(out.end(), combos.begin(), combos.end());
    return out;
}

} // namespace

std::vector<std::vector<int>> all_stopping_times(const ScenarioTree& tree) {
    std::vector<std::vector<int>> out;
    for (const auto& a : stopping_options(tree, tree.root())) {
        std::vector<int> tau(tree.leaf_count());
        for (const auto& [l, d] : a) tau[l] = d;
        out.push_back(std::move(tau));
    }
    return out;
}

double stopping_enumeration_value(const AdaptedProcess& x) {
    const auto& tree = *x.tree();
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& tau : all_stopping_times(tree)) {
        double v = 0.0;
        for (LeafIndex l = 0; l < tree.leaf_count(); ++l) {
            v += tree.leaf_probability(l) * -x[tree.path(l)[static_cast<std::size_t>(tau[l])]];
        }
        best = std::max(best, v);
    }
    return best;
}

double avar_dual_greedy(const StaticRV& y, double alpha) {
    const auto& tree = *y.tree();
    std::vector<LeafIndex> order(y.size());
    std::iota(order.begin(), order.end(), LeafIndex{0});
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return y[a] < y[b]; });
    double budget = alpha; // probability mass still carrying weight 1/alpha
    double value = 0.0;
    for (auto l : order) {
        const double take = std::min(budget, tree.leaf_probability(l));
        value += take * -y[l];
        budget -= take;
        if (budget <= 0.0) break;
    }
    return value / alpha;
}

} // namespace scenrisk::testing
