#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ktmap {

using NodeIndex = std::size_t;

struct WeightedEdge {
    NodeIndex u = 0;
    NodeIndex v = 0;
    double weight = 1.0;
};

struct Neighbor {
    NodeIndex node = 0;
    double weight = 1.0;
};

/// Undirected simple graph over dense node indices [0, n). Neighbor lists are
/// sorted by index, so iteration order is deterministic everywhere.
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t node_count);

    /// Builds a graph from an edge list. Parallel edges are merged by summing
    /// their weights; self-loops and out-of-range endpoints throw DataError.
    static Graph from_edges(std::size_t node_count, std::span<const WeightedEdge> edges);

    std::size_t node_count() const { return adjacency_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    double total_weight() const { return total_weight_; }

    std::span<const Neighbor> neighbors(NodeIndex u) const { return adjacency_.at(u); }
    std::size_t degree(NodeIndex u) const { return adjacency_.at(u).size(); }
    double strength(NodeIndex u) const { return strength_.at(u); }
    bool has_edge(NodeIndex u, NodeIndex v) const;

    /// Every edge once, with u < v, in (u, v) order.
    std::vector<WeightedEdge> edges() const;

private:
    std::vector<std::vector<Neighbor>> adjacency_;
    std::vector<double> strength_;
    std::size_t edge_count_ = 0;
    double total_weight_ = 0.0;
};

/// A graph whose node i stands for node origin[i] of some parent graph.
struct MappedGraph {
    Graph graph;
    std::vector<NodeIndex> origin;
};

/// Induced subgraph on `nodes` (parent indices, kept in the given order).
MappedGraph induced_subgraph(const Graph& graph, std::span<const NodeIndex> nodes);

} // namespace ktmap
