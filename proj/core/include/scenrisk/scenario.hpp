#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace scenrisk {

/// Position of a node in the canonical (depth, id) ordering of its tree.
using NodeIndex = std::size_t;
/// Position of a leaf among the tree's leaves, in canonical order.
using LeafIndex = std::size_t;

/// One row of a tree description as it appears in a tree file.
struct NodeSpec {
    std::string id;
    std::optional<std::string> parent;
    double branch_prob = 1.0;
    double time = 0.0;
};

struct Node {
    std::string id;
    std::optional<NodeIndex> parent;
    int depth = 0;
    double time = 0.0;
    double branch_prob = 1.0;
    /// Unconditional probability: product of branch probabilities root to node.
    double prob = 1.0;
    std::vector<NodeIndex> children;
};

class ScenarioTree;
using TreePtr = std::shared_ptr<const ScenarioTree>;

/**
 * Finite filtered probability space.
 *
 * A rooted tree whose depth-k nodes generate the sigma-algebra at time t_k.
 * Every branch carries strictly positive probability and all leaves sit at
 * the terminal depth K. Nodes are stored in canonical (depth, id) order, so
 * iteration and tie-breaking are deterministic everywhere downstream.
 *
 * Immutable once built; share it through TreePtr.
 */
class ScenarioTree {
public:
    /// Validates the node list and precomputes unconditional probabilities.
    /// Throws ValidationError naming the offending node.
    static TreePtr build(std::vector<NodeSpec> spec);

    /// Binary tree with all branch probabilities 1/2 and times k/depth.
    /// Node ids are the root "root" and the u/d path strings below it.
    static TreePtr uniform_binomial(int depth);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t leaf_count() const { return leaves_.size(); }
    int depth() const { return max_depth_; }
    double terminal_time() const { return times_.back(); }
    std::span<const double> times() const { return times_; }

    const Node& node(NodeIndex n) const { return nodes_.at(n); }
    std::span<const Node> nodes() const { return nodes_; }
    NodeIndex root() const { return 0; }

    /// Throws ValidationError on unknown ids.
    NodeIndex index_of(std::string_view id) const;
    std::optional<NodeIndex> find(std::string_view id) const;

    double node_probability(NodeIndex n) const { return nodes_.at(n).prob; }
    double node_probability(std::string_view id) const { return node_probability(index_of(id)); }

    /// Nodes at depth k in canonical order.
    std::span<const NodeIndex> nodes_at_depth(int k) const { return by_depth_.at(static_cast<std::size_t>(k)); }

    NodeIndex leaf_node(LeafIndex leaf) const { return leaves_.at(leaf); }
    double leaf_probability(LeafIndex leaf) const { return nodes_[leaves_.at(leaf)].prob; }
    /// Leaf position of a depth-K node; throws if the node is not a leaf.
    LeafIndex leaf_index(NodeIndex n) const;

    /// Nodes on the root-to-leaf path, indexed by depth 0..K.
    std::span<const NodeIndex> path(LeafIndex leaf) const;

    /// Leaves below (or equal to) node n, in canonical order.
    std::span<const LeafIndex> leaves_under(NodeIndex n) const { return leaves_under_.at(n); }

    bool is_leaf(NodeIndex n) const { return nodes_.at(n).depth == max_depth_; }

    friend bool operator==(const ScenarioTree& a, const ScenarioTree& b);

private:
    ScenarioTree() = default;

    std::vector<Node> nodes_;
    std::vector<double> times_;
    std::vector<std::vector<NodeIndex>> by_depth_;
    std::vector<NodeIndex> leaves_;
    std::vector<NodeIndex> paths_; // leaf_count x (K+1), row-major
    std::vector<std::vector<LeafIndex>> leaves_under_;
    std::vector<std::ptrdiff_t> leaf_pos_; // node -> leaf position or -1
    std::unordered_map<std::string, NodeIndex> index_;
    int max_depth_ = 0;
};

/// True when both pointers refer to the same or structurally equal trees.
bool same_tree(const TreePtr& a, const TreePtr& b);

/// Throws ValidationError("tree mismatch") unless same_tree(a, b).
void require_same_tree(const TreePtr& a, const TreePtr& b);

} // namespace scenrisk
