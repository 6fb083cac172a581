#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ktmap/corpus.hpp"
#include "ktmap/graph.hpp"
#include "ktmap/translational.hpp"

namespace ktmap {

struct HubConfig {
    /// Degree quantile a candidate must reach (nearest-rank).
    double degree_pct = 0.90;
    /// Clustering ceiling; empty means the median of the defined coefficients.
    std::optional<double> c_max;
    double p_min = 0.3;
    double t_spread_min = 0.2;

    void validate() const;
};

struct HubCandidate {
    NodeIndex node = 0;
    std::size_t degree = 0;
    std::optional<double> clustering;
    double participation = 0.0;
    /// Fronts (labels) holding at least one neighbour, ascending.
    std::vector<std::size_t> bridged_fronts;
    /// Max minus min mean T over the bridged fronts that have scored members.
    std::optional<double> t_spread;
    double hub_score = 0.0;
    std::size_t rank = 0;
};

struct HubReport {
    /// Ranked by hub_score descending, ties by document id.
    std::vector<HubCandidate> hubs;
    double degree_threshold = 0.0;
    double c_max = 0.0;
    /// Connected components of the projection restricted to hub nodes.
    std::vector<std::vector<NodeIndex>> regions;
};

/// Nodes with degree at or above the quantile, clustering at most c_max
/// (undefined counts as 0), participation at least p_min and T spread at
/// least t_spread_min. Score is P * t_spread * k / k_max. `labels` are the
/// level-2 fronts; `ids` break ranking ties.
HubReport detect_translational_hubs(const Graph& graph, std::span<const std::size_t> labels,
                                    std::span<const TScore> scores, std::span<const std::string> ids,
                                    const HubConfig& config = {});

HubReport detect_translational_hubs(const CitationNetwork& net, std::span<const std::size_t> labels,
                                    std::span<const TScore> scores, const HubConfig& config = {});

using PathCount = boost::multiprecision::cpp_int;

/// Knowledge-flow arc: `from` is the cited document, `to` the citing one.
struct FlowArc {
    NodeIndex from = 0;
    NodeIndex to = 0;
    PathCount spc;
};

struct SearchPathCounts {
    /// Arcs of the acyclic reduction, sorted by (from, to).
    std::vector<FlowArc> arcs;
    /// Citations dropped to make the graph acyclic.
    std::vector<Citation> removed;
    std::vector<std::string> warnings;
};

/// Drops anti-chronological citations (citing year older than cited year),
/// then breaks remaining cycles by deleting the lexicographically largest
/// (citing id, cited id) citation inside each strongly connected component.
SearchPathCounts acyclic_reduction(const CitationNetwork& net);

/// Search path count of every arc: paths from any source (cites nothing) to
/// the arc tail times paths from the arc head to any sink (uncited).
SearchPathCounts search_path_counts(const CitationNetwork& net);

struct MainPath {
    /// Oldest first: from a source to a sink along knowledge flow.
    std::vector<NodeIndex> nodes;
    /// spc[i] belongs to the arc nodes[i] -> nodes[i + 1].
    std::vector<PathCount> spc;
    std::vector<Citation> removed;
    std::vector<std::string> warnings;
};

/// Greedy walk from the maximal-SPC source arc along maximal-SPC arcs;
/// ties go to the smallest head id. DataError on a network without citations.
MainPath main_path(const CitationNetwork& net);

} // namespace ktmap
