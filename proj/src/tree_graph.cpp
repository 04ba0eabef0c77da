#include "gravelai/tree_graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "gravelai/error.hpp"

namespace gravelai {

namespace {

void check_dimension(const TreeGraph& tree, std::span<const double> values) {
    if (values.size() != tree.size()) {
        throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(tree.size()) +
                                                      " values, got " + std::to_string(values.size()));
    }
}

}  // namespace

TreeGraph::TreeGraph(std::size_t node_count, std::vector<Edge> edges)
    : edges_(std::move(edges)), adjacency_(node_count) {
    if (node_count == 0) {
        throw Error(ErrorCode::NotATree, "a tree needs at least one node");
    }
    if (edges_.size() != node_count - 1) {
        throw Error(ErrorCode::NotATree, "a tree on " + std::to_string(node_count) + " nodes has " +
                                             std::to_string(node_count - 1) + " edges, got " +
                                             std::to_string(edges_.size()));
    }
    for (const auto& [a, b] : edges_) {
        if (a >= node_count || b >= node_count) {
            throw Error(ErrorCode::IndexOutOfRange,
                        "edge (" + std::to_string(a) + ", " + std::to_string(b) + ") out of range");
        }
        if (a == b) {
            throw Error(ErrorCode::NotATree, "self-loop at node " + std::to_string(a));
        }
        adjacency_[a].push_back(b);
        adjacency_[b].push_back(a);
    }
    for (auto& list : adjacency_) {
        std::sort(list.begin(), list.end());
        if (std::adjacent_find(list.begin(), list.end()) != list.end()) {
            throw Error(ErrorCode::NotATree, "duplicate edge");
        }
    }

    std::vector<bool> seen(node_count, false);
    std::vector<Arm> stack{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
        Arm node = stack.back();
        stack.pop_back();
        for (Arm next : adjacency_[node]) {
            if (!seen[next]) {
                seen[next] = true;
                ++reached;
                stack.push_back(next);
            }
        }
    }
    if (reached != node_count) {
        throw Error(ErrorCode::NotATree, "graph is disconnected");
    }
}

bool TreeGraph::adjacent(Arm a, Arm b) const {
    const auto& list = adjacency_.at(a);
    return std::binary_search(list.begin(), list.end(), b);
}

TreeGraph build_tree(std::size_t node_count, std::vector<Edge> edges) {
    return TreeGraph(node_count, std::move(edges));
}

RootedTree::RootedTree(const TreeGraph& tree, Arm root)
    : root_(root), parent_(tree.size(), kNoParent), children_(tree.size()) {
    if (root >= tree.size()) {
        throw Error(ErrorCode::IndexOutOfRange, "root " + std::to_string(root) + " out of range");
    }
    preorder_.reserve(tree.size());
    postorder_.reserve(tree.size());

    // Iterative DFS; each frame remembers the next neighbor to inspect.
    std::vector<std::pair<Arm, std::size_t>> stack{{root, 0}};
    preorder_.push_back(root);
    while (!stack.empty()) {
        auto& [node, next] = stack.back();
        auto nbrs = tree.neighbors(node);
        if (next == nbrs.size()) {
            postorder_.push_back(node);
            stack.pop_back();
            continue;
        }
        Arm child = nbrs[next++];
        if (child == root || parent_[child] != kNoParent) {
            continue;
        }
        parent_[child] = node;
        children_[node].push_back(child);
        preorder_.push_back(child);
        stack.emplace_back(child, 0);
    }
}

std::optional<Arm> RootedTree::parent(Arm node) const {
    Arm p = parent_.at(node);
    if (p == kNoParent) {
        return std::nullopt;
    }
    return p;
}

std::vector<Arm> RootedTree::descendants(Arm node) const {
    std::vector<Arm> out;
    std::vector<Arm> stack(children_.at(node).begin(), children_.at(node).end());
    while (!stack.empty()) {
        Arm v = stack.back();
        stack.pop_back();
        out.push_back(v);
        stack.insert(stack.end(), children_[v].begin(), children_[v].end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

RootedTree root_at(const TreeGraph& tree, Arm root) { return RootedTree(tree, root); }

std::vector<Arm> modes(const TreeGraph& tree, std::span<const double> values) {
    check_dimension(tree, values);
    std::vector<Arm> out;
    for (Arm k = 0; k < tree.size(); ++k) {
        auto nbrs = tree.neighbors(k);
        if (std::all_of(nbrs.begin(), nbrs.end(), [&](Arm l) { return values[k] > values[l]; })) {
            out.push_back(k);
        }
    }
    return out;
}

std::vector<Arm> mode_neighborhood(const TreeGraph& tree, std::span<const double> values) {
    std::vector<bool> member(tree.size(), false);
    for (Arm k : modes(tree, values)) {
        member[k] = true;
        for (Arm l : tree.neighbors(k)) {
            member[l] = true;
        }
    }
    std::vector<Arm> out;
    for (Arm k = 0; k < tree.size(); ++k) {
        if (member[k]) {
            out.push_back(k);
        }
    }
    return out;
}

bool is_at_most_m_modal(const TreeGraph& tree, std::span<const double> values, std::size_t m) {
    if (m < 1) {
        throw Error(ErrorCode::InvalidArgument, "mode budget must be at least 1");
    }
    return modes(tree, values).size() <= m;
}

std::vector<std::size_t> bfs_distances(const TreeGraph& tree, Arm source) {
    constexpr auto kUnset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> dist(tree.size(), kUnset);
    std::deque<Arm> queue{source};
    dist.at(source) = 0;
    while (!queue.empty()) {
        Arm node = queue.front();
        queue.pop_front();
        for (Arm next : tree.neighbors(node)) {
            if (dist[next] == kUnset) {
                dist[next] = dist[node] + 1;
                queue.push_back(next);
            }
        }
    }
    return dist;
}

std::size_t tree_diameter(const TreeGraph& tree) {
    auto first = bfs_distances(tree, 0);
    auto far = static_cast<Arm>(std::max_element(first.begin(), first.end()) - first.begin());
    auto second = bfs_distances(tree, far);
    return *std::max_element(second.begin(), second.end());
}

GraphMetrics graph_metrics(const TreeGraph& tree) {
    GraphMetrics metrics;
    metrics.distances.reserve(tree.size());
    for (Arm k = 0; k < tree.size(); ++k) {
        metrics.distances.push_back(bfs_distances(tree, k));
        const auto& row = metrics.distances.back();
        metrics.diameter = std::max(metrics.diameter, *std::max_element(row.begin(), row.end()));
        metrics.max_degree = std::max(metrics.max_degree, tree.degree(k));
    }
    return metrics;
}

TreeGraph line_tree(std::size_t node_count) {
    std::vector<Edge> edges;
    for (Arm k = 1; k < node_count; ++k) {
        edges.emplace_back(k - 1, k);
    }
    return TreeGraph(node_count, std::move(edges));
}

TreeGraph balanced_tree(std::size_t branching, std::size_t height) {
    if (branching == 0) {
        return TreeGraph(1, {});
    }
    std::vector<Edge> edges;
    std::size_t level_start = 0;
    std::size_t level_size = 1;
    std::size_t next = 1;
    for (std::size_t depth = 0; depth < height; ++depth) {
        for (std::size_t i = 0; i < level_size; ++i) {
            for (std::size_t c = 0; c < branching; ++c) {
                edges.emplace_back(level_start + i, next++);
            }
        }
        level_start += level_size;
        level_size *= branching;
    }
    return TreeGraph(next, std::move(edges));
}

TreeGraph random_tree(std::size_t node_count, std::mt19937_64& rng) {
    std::vector<Edge> edges;
    for (Arm k = 1; k < node_count; ++k) {
        std::uniform_int_distribution<Arm> pick(0, k - 1);
        edges.emplace_back(pick(rng), k);
    }
    return TreeGraph(node_count, std::move(edges));
}

}  // namespace gravelai
