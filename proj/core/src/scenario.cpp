#include "scenrisk/scenario.hpp"

#include "scenrisk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numeric>

namespace scenrisk {

namespace {

constexpr double kProbTol = 1e-12;

[[noreturn]] void fail(std::string_view node, std::string_view what) {
    throw ValidationError(fmt::format("node '{}': {}", node, what));
}

} // namespace

TreePtr ScenarioTree::build(std::vector<NodeSpec> spec) {
    if (spec.empty()) {
        throw ValidationError("tree specification is empty");
    }

    std::unordered_map<std::string, std::size_t> pos;
    std::optional<std::size_t> root;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const auto& s = spec[i];
        if (s.id.empty()) {
            throw ValidationError(fmt::format("node #{}: empty id", i));
        }
        if (!pos.emplace(s.id, i).second) {
            fail(s.id, "duplicate id");
        }
        if (!s.parent) {
            if (root) {
                fail(s.id, fmt::format("second root (first root is '{}')", spec[*root].id));
            }
            root = i;
        }
    }
    if (!root) {
        throw ValidationError("tree has no root (every node names a parent)");
    }

    // depth by walking parent links; a walk longer than the node count is a cycle
    std::vector<int> depth(spec.size(), -1);
    depth[*root] = 0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        std::vector<std::size_t> chain;
        std::size_t cur = i;
        while (depth[cur] < 0) {
            chain.push_back(cur);
            if (chain.size() > spec.size()) {
                fail(spec[i].id, "parent links form a cycle");
            }
            const auto it = pos.find(*spec[cur].parent);
            if (it == pos.end()) {
                fail(spec[cur].id, fmt::format("unknown parent '{}'", *spec[cur].parent));
            }
            cur = it->second;
        }
        for (auto c = chain.rbegin(); c != chain.rend(); ++c) {
            depth[*c] = depth[cur] + 1;
            cur = *c;
        }
    }

    std::vector<std::size_t> order(spec.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (depth[a] != depth[b]) return depth[a] < depth[b];
        return spec[a].id < spec[b].id;
    });

    std::shared_ptr<ScenarioTree> tree(new ScenarioTree());
    auto& t = *tree;
    t.nodes_.resize(spec.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        t.index_.emplace(spec[order[k]].id, k);
    }
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& s = spec[order[k]];
        auto& n = t.nodes_[k];
        n.id = s.id;
        n.depth = depth[order[k]];
        n.time = s.time;
        n.branch_prob = s.branch_prob;
        if (s.parent) {
            n.parent = t.index_.at(*s.parent);
            t.nodes_[*n.parent].children.push_back(k);
        }
        t.max_depth_ = std::max(t.max_depth_, n.depth);
    }

    const auto& root_node = t.nodes_[0];
    if (root_node.branch_prob != 1.0) {
        fail(root_node.id, "root branch probability must be 1");
    }
    if (root_node.time != 0.0) {
        fail(root_node.id, "root time must be 0");
    }

    t.by_depth_.resize(static_cast<std::size_t>(t.max_depth_) + 1);
    t.times_.assign(static_cast<std::size_t>(t.max_depth_) + 1, 0.0);
    for (NodeIndex k = 0; k < t.nodes_.size(); ++k) {
        auto& n = t.nodes_[k];
        const auto d = static_cast<std::size_t>(n.depth);
        if (t.by_depth_[d].empty()) {
            t.times_[d] = n.time;
        } else if (n.time != t.times_[d]) {
            fail(n.id, fmt::format("time {} differs from depth-{} time {}", n.time, d, t.times_[d]));
        }
        t.by_depth_[d].push_back(k);

        if (n.parent) {
            if (!(n.branch_prob > 0.0 && n.branch_prob <= 1.0)) {
                fail(n.id, fmt::format("branch probability {} outside (0, 1]", n.branch_prob));
            }
            n.prob = t.nodes_[*n.parent].prob * n.branch_prob;
        }
        if (n.children.empty() && n.depth != t.max_depth_) {
            fail(n.id, fmt::format("leaf at depth {} but tree depth is {}", n.depth, t.max_depth_));
        }
    }
    for (std::size_t d = 1; d < t.times_.size(); ++d) {
        if (!(t.times_[d] > t.times_[d - 1])) {
            fail(t.nodes_[t.by_depth_[d].front()].id,
                 fmt::format("time {} not after depth-{} time {}", t.times_[d], d - 1, t.times_[d - 1]));
        }
    }
    for (const auto& n : t.nodes_) {
        if (n.children.empty()) continue;
        double sum = 0.0;
        for (auto c : n.children) sum += t.nodes_[c].branch_prob;
        if (std::abs(sum - 1.0) > kProbTol) {
            fail(n.id, fmt::format("children probabilities sum to {:.17g}, not 1", sum));
        }
    }

    t.leaves_.assign(t.by_depth_.back().begin(), t.by_depth_.back().end());
    t.leaf_pos_.assign(t.nodes_.size(), -1);
    t.leaves_under_.resize(t.nodes_.size());
    const auto width = static_cast<std::size_t>(t.max_depth_) + 1;
    t.paths_.resize(t.leaves_.size() * width);
    double leaf_sum = 0.0;
    for (LeafIndex l = 0; l < t.leaves_.size(); ++l) {
        NodeIndex cur = t.leaves_[l];
        t.leaf_pos_[cur] = static_cast<std::ptrdiff_t>(l);
        leaf_sum += t.nodes_[cur].prob;
        for (int d = t.max_depth_; d >= 0; --d) {
            t.paths_[l * width + static_cast<std::size_t>(d)] = cur;
            t.leaves_under_[cur].push_back(l);
            if (d > 0) cur = *t.nodes_[cur].parent;
        }
    }
    if (std::abs(leaf_sum - 1.0) > kProbTol) {
        throw ValidationError(fmt::format("leaf probabilities sum to {:.17g}, not 1", leaf_sum));
    }
    return tree;
}

TreePtr ScenarioTree::uniform_binomial(int depth) {
    if (depth < 1) {
        throw ValidationError(fmt::format("uniform_binomial: depth {} < 1", depth));
    }
    std::vector<NodeSpec> spec;
    spec.push_back({"root", std::nullopt, 1.0, 0.0});
    std::vector<std::string> level{""};
    for (int k = 1; k <= depth; ++k) {
        std::vector<std::string> next;
        next.reserve(level.size() * 2);
        const double t = static_cast<double>(k) / depth;
        for (const auto& p : level) {
            const std::optional<std::string> parent = p.empty() ? std::string("root") : p;
            for (char c : {'u', 'd'}) {
                next.push_back(p + c);
                spec.push_back({next.back(), parent, 0.5, t});
            }
        }
        level = std::move(next);
    }
    return build(std::move(spec));
}

NodeIndex ScenarioTree::index_of(std::string_view id) const {
    if (auto n = find(id)) return *n;
    throw ValidationError(fmt::format("unknown node id '{}'", id));
}

std::optional<NodeIndex> ScenarioTree::find(std::string_view id) const {
    const auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

LeafIndex ScenarioTree::leaf_index(NodeIndex n) const {
    const auto p = leaf_pos_.at(n);
    if (p < 0) {
        throw ValidationError(fmt::format("node '{}' is not a leaf", nodes_[n].id));
    }
    return static_cast<LeafIndex>(p);
}

std::span<const NodeIndex> ScenarioTree::path(LeafIndex leaf) const {
    const auto width = static_cast<std::size_t>(max_depth_) + 1;
    return std::span<const NodeIndex>(paths_).subspan(leaf * width, width);
}

bool operator==(const ScenarioTree& a, const ScenarioTree& b) {
    if (a.nodes_.size() != b.nodes_.size() || a.times_ != b.times_) return false;
    for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
        const auto& x = a.nodes_[i];
        const auto& y = b.nodes_[i];
        if (x.id != y.id || x.parent != y.parent || x.branch_prob != y.branch_prob) return false;
    }
    return true;
}

bool same_tree(const TreePtr& a, const TreePtr& b) {
    if (!a || !b) return false;
    return a == b || *a == *b;
}

void require_same_tree(const TreePtr& a, const TreePtr& b) {
    if (!same_tree(a, b)) {
        throw ValidationError("tree mismatch");
    }
}

} // namespace scenrisk
