#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace gravelai {

/// Arm index. 0-based everywhere; arm `i` here is arm `i + 1` in 1-based notation.
using Arm = std::size_t;
using Edge = std::pair<Arm, Arm>;

/// Undirected tree over arms 0..K-1. Validated on construction, immutable afterwards.
class TreeGraph {
public:
    TreeGraph(std::size_t node_count, std::vector<Edge> edges);

    std::size_t size() const noexcept { return adjacency_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    /// Neighbors in ascending index order.
    std::span<const Arm> neighbors(Arm node) const { return adjacency_.at(node); }
    std::size_t degree(Arm node) const { return adjacency_.at(node).size(); }
    bool adjacent(Arm a, Arm b) const;

private:
    std::vector<Edge> edges_;
    std::vector<std::vector<Arm>> adjacency_;
};

TreeGraph build_tree(std::size_t node_count, std::vector<Edge> edges);

/// Directed view of a tree obtained by depth-first search from `root`.
/// Children are visited in ascending arm index.
class RootedTree {
public:
    RootedTree(const TreeGraph& tree, Arm root);

    Arm root() const noexcept { return root_; }
    std::size_t size() const noexcept { return parent_.size(); }
    std::optional<Arm> parent(Arm node) const;
    std::span<const Arm> children(Arm node) const { return children_.at(node); }
    bool is_leaf(Arm node) const { return children_.at(node).empty(); }

    /// Every node appears after all of its descendants; the root is last.
    std::span<const Arm> postorder() const noexcept { return postorder_; }
    /// DFS discovery order; the root is first.
    std::span<const Arm> preorder() const noexcept { return preorder_; }

    std::vector<Arm> descendants(Arm node) const;

private:
    static constexpr Arm kNoParent = static_cast<Arm>(-1);

    Arm root_;
    std::vector<Arm> parent_;
    std::vector<std::vector<Arm>> children_;
    std::vector<Arm> preorder_;
    std::vector<Arm> postorder_;
};

RootedTree root_at(const TreeGraph& tree, Arm root);

/// Arms whose value strictly exceeds every neighbor's value, ascending.
std::vector<Arm> modes(const TreeGraph& tree, std::span<const double> values);

/// Modes together with all arms adjacent to a mode, ascending.
std::vector<Arm> mode_neighborhood(const TreeGraph& tree, std::span<const double> values);

bool is_at_most_m_modal(const TreeGraph& tree, std::span<const double> values, std::size_t m);

struct GraphMetrics {
    std::size_t diameter = 0;
    std::size_t max_degree = 0;
    /// Hop counts, distances[j][k].
    std::vector<std::vector<std::size_t>> distances;
};

GraphMetrics graph_metrics(const TreeGraph& tree);

/// Hop distances from `source` to every node.
std::vector<std::size_t> bfs_distances(const TreeGraph& tree, Arm source);

/// Diameter by two breadth-first sweeps, O(K).
std::size_t tree_diameter(const TreeGraph& tree);

// Generators used by the experiment drivers and tests.

TreeGraph line_tree(std::size_t node_count);
/// Complete d-ary tree of the given height in breadth-first numbering; node 0 is the root.
TreeGraph balanced_tree(std::size_t branching, std::size_t height);
/// Random recursive tree: node i > 0 attaches to a uniformly chosen earlier node.
TreeGraph random_tree(std::size_t node_count, std::mt19937_64& rng);

}  // namespace gravelai
