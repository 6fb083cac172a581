#include "ktmap/graph.hpp"

#include <algorithm>
#include <string>

#include "ktmap/error.hpp"

namespace ktmap {

Graph::Graph(std::size_t node_count) : adjacency_(node_count), strength_(node_count, 0.0) {}

Graph Graph::from_edges(std::size_t node_count, std::span<const WeightedEdge> edges) {
    std::vector<WeightedEdge> sorted;
    sorted.reserve(edges.size());
    for (const auto& e : edges) {
        if (e.u >= node_count || e.v >= node_count)
            throw DataError("edge endpoint out of range: (" + std::to_string(e.u) + ", " +
                            std::to_string(e.v) + ")");
        if (e.u == e.v)
            throw DataError("self-loop on node " + std::to_string(e.u));
        sorted.push_back(e.u < e.v ? e : WeightedEdge{e.v, e.u, e.weight});
    }
    std::sort(sorted.begin(), sorted.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });

    Graph g(node_count);
    for (std::size_t i = 0; i < sorted.size();) {
        WeightedEdge merged = sorted[i];
        std::size_t j = i + 1;
        for (; j < sorted.size() && sorted[j].u == merged.u && sorted[j].v == merged.v; ++j)
            merged.weight += sorted[j].weight;
        g.adjacency_[merged.u].push_back({merged.v, merged.weight});
        g.adjacency_[merged.v].push_back({merged.u, merged.weight});
        g.strength_[merged.u] += merged.weight;
        g.strength_[merged.v] += merged.weight;
        g.total_weight_ += merged.weight;
        ++g.edge_count_;
        i = j;
    }
    for (auto& list : g.adjacency_)
        std::sort(list.begin(), list.end(),
                  [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    return g;
}

bool Graph::has_edge(NodeIndex u, NodeIndex v) const {
    const auto& list = adjacency_.at(u);
    auto it = std::lower_bound(list.begin(), list.end(), v,
                               [](const Neighbor& n, NodeIndex x) { return n.node < x; });
    return it != list.end() && it->node == v;
}

std::vector<WeightedEdge> Graph::edges() const {
    std::vector<WeightedEdge> out;
    out.reserve(edge_count_);
    for (NodeIndex u = 0; u < adjacency_.size(); ++u)
        for (const auto& n : adjacency_[u])
            if (u < n.node) out.push_back({u, n.node, n.weight});
    return out;
}

MappedGraph induced_subgraph(const Graph& graph, std::span<const NodeIndex> nodes) {
    std::vector<std::size_t> local(graph.node_count(), static_cast<std::size_t>(-1));
    for (std::size_t i = 0; i < nodes.size(); ++i) local.at(nodes[i]) = i;

    std::vector<WeightedEdge> edges;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (const auto& n : graph.neighbors(nodes[i])) {
            const std::size_t j = local[n.node];
            if (j != static_cast<std::size_t>(-1) && i < j) edges.push_back({i, j, n.weight});
        }
    return {Graph::from_edges(nodes.size(), edges), {nodes.begin(), nodes.end()}};
}

} // namespace ktmap
