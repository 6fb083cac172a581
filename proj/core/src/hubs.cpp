#include "ktmap/hubs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>

#include "ktmap/error.hpp"
#include "ktmap/log.hpp"

namespace ktmap {

void HubConfig::validate() const {
    if (!(degree_pct >= 0.0 && degree_pct <= 1.0)) throw UsageError("degree_pct must lie in [0, 1]");
    if (c_max && !(*c_max >= 0.0 && *c_max <= 1.0)) throw UsageError("c_max must lie in [0, 1]");
    if (!(p_min >= 0.0 && p_min <= 1.0)) throw UsageError("p_min must lie in [0, 1]");
    if (!(t_spread_min >= 0.0 && t_spread_min <= 1.0)) throw UsageError("t_spread_min must lie in [0, 1]");
}

namespace {

double nearest_rank(std::vector<double> values, double pct) {
    std::sort(values.begin(), values.end());
    const auto rank = static_cast<std::size_t>(std::ceil(pct * static_cast<double>(values.size()) - 1e-9));
    return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::optional<double> clustering_of(const Graph& graph, NodeIndex node) {
    const auto nbrs = graph.neighbors(node);
    const std::size_t k = nbrs.size();
    if (k < 2) return std::nullopt;
    std::size_t links = 0;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b) links += graph.has_edge(nbrs[a].node, nbrs[b].node);
    return 2.0 * static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1));
}

std::vector<std::vector<NodeIndex>> hub_regions(const Graph& graph, std::span<const HubCandidate> hubs) {
    std::set<NodeIndex> members;
    for (const auto& h : hubs) members.insert(h.node);
    std::set<NodeIndex> visited;
    std::vector<std::vector<NodeIndex>> regions;
    for (NodeIndex start : members) {
        if (visited.contains(start)) continue;
        auto& region = regions.emplace_back();
        std::vector<NodeIndex> stack{start};
        visited.insert(start);
        while (!stack.empty()) {
            const NodeIndex u = stack.back();
            stack.pop_back();
            region.push_back(u);
            for (const auto& n : graph.neighbors(u))
                if (members.contains(n.node) && visited.insert(n.node).second) stack.push_back(n.node);
        }
        std::sort(region.begin(), region.end());
    }
    return regions;
}

} // namespace

HubReport detect_translational_hubs(const Graph& graph, std::span<const std::size_t> labels,
                                    std::span<const TScore> scores, std::span<const std::string> ids,
                                    const HubConfig& config) {
    config.validate();
    const std::size_t n = graph.node_count();
    if (labels.size() != n || scores.size() != n || ids.size() != n)
        throw UsageError("partition, scores and ids must cover the same node set as the graph");

    HubReport report;
    if (n == 0) return report;
    const auto summaries = front_score_summary(labels, scores);

    std::vector<double> degrees(n);
    std::vector<double> defined_c;
    std::vector<std::optional<double>> clustering(n);
    std::size_t k_max = 0;
    for (NodeIndex i = 0; i < n; ++i) {
        degrees[i] = static_cast<double>(graph.degree(i));
        k_max = std::max(k_max, graph.degree(i));
        clustering[i] = clustering_of(graph, i);
        if (clustering[i]) defined_c.push_back(*clustering[i]);
    }
    report.degree_threshold = nearest_rank(degrees, config.degree_pct);
    report.c_max = config.c_max ? *config.c_max : median(defined_c);
    if (k_max == 0) return report;

    for (NodeIndex i = 0; i < n; ++i) {
        const std::size_t k = graph.degree(i);
        if (k == 0 || static_cast<double>(k) < report.degree_threshold) continue;
        if (clustering[i].value_or(0.0) > report.c_max) continue;

        std::map<std::size_t, std::size_t> per_front;
        for (const auto& nb : graph.neighbors(i)) ++per_front[labels[nb.node]];
        double concentration = 0.0;
        for (const auto& [front, count] : per_front) {
            const double share = static_cast<double>(count) / static_cast<double>(k);
            concentration += share * share;
        }
        const double participation = std::max(0.0, 1.0 - concentration);
        if (participation < config.p_min || per_front.size() < 2) continue;

        std::optional<double> lo, hi;
        std::size_t scored_fronts = 0;
        for (const auto& [front, count] : per_front) {
            const auto& mean = summaries[front].mean_t;
            if (!mean) continue;
            ++scored_fronts;
            lo = lo ? std::min(*lo, *mean) : *mean;
            hi = hi ? std::max(*hi, *mean) : *mean;
        }
        if (scored_fronts < 2) continue;
        const double spread = *hi - *lo;
        if (spread < config.t_spread_min) continue;

        HubCandidate h;
        h.node = i;
        h.degree = k;
        h.clustering = clustering[i];
        h.participation = participation;
        for (const auto& [front, count] : per_front) h.bridged_fronts.push_back(front);
        h.t_spread = spread;
        h.hub_score = participation * spread * (static_cast<double>(k) / static_cast<double>(k_max));
        report.hubs.push_back(std::move(h));
    }

    std::sort(report.hubs.begin(), report.hubs.end(), [&](const HubCandidate& a, const HubCandidate& b) {
        if (a.hub_score != b.hub_score) return a.hub_score > b.hub_score;
        return ids[a.node] < ids[b.node];
    });
    for (std::size_t r = 0; r < report.hubs.size(); ++r) report.hubs[r].rank = r + 1;
    report.regions = hub_regions(graph, report.hubs);
    return report;
}

HubReport detect_translational_hubs(const CitationNetwork& net, std::span<const std::size_t> labels,
                                    std::span<const TScore> scores, const HubConfig& config) {
    std::vector<std::string> ids;
    ids.reserve(net.size());
    for (const auto& d : net.docs()) ids.push_back(d.id);
    return detect_translational_hubs(net.projection(), labels, scores, ids, config);
}

namespace {

// Kosaraju over citations; returns a component id per node.
std::vector<std::size_t> strong_components(std::size_t n, const std::vector<Citation>& citations) {
    std::vector<std::vector<NodeIndex>> out(n), in(n);
    for (const auto& c : citations) {
        out[c.citing].push_back(c.cited);
        in[c.cited].push_back(c.citing);
    }
    std::vector<NodeIndex> order;
    order.reserve(n);
    std::vector<bool> seen(n, false);
    for (NodeIndex s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::vector<std::pair<NodeIndex, std::size_t>> stack{{s, 0}};
        seen[s] = true;
        while (!stack.empty()) {
            auto& [u, next] = stack.back();
            if (next < out[u].size()) {
                const NodeIndex v = out[u][next++];
                if (!seen[v]) {
                    seen[v] = true;
                    stack.emplace_back(v, 0);
                }
            } else {
                order.push_back(u);
                stack.pop_back();
            }
        }
    }
    constexpr auto kUnset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> comp(n, kUnset);
    std::size_t count = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (comp[*it] != kUnset) continue;
        std::vector<NodeIndex> stack{*it};
        comp[*it] = count;
        while (!stack.empty()) {
            const NodeIndex u = stack.back();
            stack.pop_back();
            for (NodeIndex v : in[u])
                if (comp[v] == kUnset) {
                    comp[v] = count;
                    stack.push_back(v);
                }
        }
        ++count;
    }
    return comp;
}

std::string edge_name(const CitationNetwork& net, const Citation& c) {
    return "(" + net.doc(c.citing).id + ", " + net.doc(c.cited).id + ")";
}

} // namespace

SearchPathCounts acyclic_reduction(const CitationNetwork& net) {
    SearchPathCounts result;
    std::vector<Citation> kept;
    for (const auto& c : net.citations()) {
        const auto& citing = net.doc(c.citing).year;
        const auto& cited = net.doc(c.cited).year;
        if (citing && cited && *citing < *cited) {
            result.removed.push_back(c);
            result.warnings.push_back("dropped anti-chronological citation " + edge_name(net, c));
        } else {
            kept.push_back(c);
        }
    }

    auto id_less = [&](const Citation& a, const Citation& b) {
        const auto& ai = net.doc(a.citing).id;
        const auto& bi = net.doc(b.citing).id;
        if (ai != bi) return ai < bi;
        return net.doc(a.cited).id < net.doc(b.cited).id;
    };
    while (true) {
        const auto comp = strong_components(net.size(), kept);
        std::map<std::size_t, Citation> largest;
        for (const auto& c : kept) {
            if (comp[c.citing] != comp[c.cited]) continue;
            auto [it, inserted] = largest.emplace(comp[c.citing], c);
            if (!inserted && id_less(it->second, c)) it->second = c;
        }
        if (largest.empty()) break;
        for (const auto& [component, c] : largest) {
            kept.erase(std::find(kept.begin(), kept.end(), c));
            result.removed.push_back(c);
            result.warnings.push_back("broke citation cycle by dropping " + edge_name(net, c));
        }
    }
    for (const auto& w : result.warnings) log_warn(w);

    for (const auto& c : kept) result.arcs.push_back({c.cited, c.citing, 0});
    std::sort(result.arcs.begin(), result.arcs.end(), [](const FlowArc& a, const FlowArc& b) {
        return a.from != b.from ? a.from < b.from : a.to < b.to;
    });
    return result;
}

SearchPathCounts search_path_counts(const CitationNetwork& net) {
    if (net.empty()) throw DataError("main path analysis needs a non-empty network");
    auto result = acyclic_reduction(net);
    const std::size_t n = net.size();

    std::vector<std::vector<NodeIndex>> succ(n), pred(n);
    for (const auto& a : result.arcs) {
        succ[a.from].push_back(a.to);
        pred[a.to].push_back(a.from);
    }
    // Kahn's algorithm; the min-heap makes the order independent of scheduling.
    std::vector<std::size_t> indegree(n);
    std::priority_queue<NodeIndex, std::vector<NodeIndex>, std::greater<>> ready;
    for (NodeIndex i = 0; i < n; ++i) {
        indegree[i] = pred[i].size();
        if (indegree[i] == 0) ready.push(i);
    }
    std::vector<NodeIndex> topo;
    topo.reserve(n);
    while (!ready.empty()) {
        const NodeIndex u = ready.top();
        ready.pop();
        topo.push_back(u);
        for (NodeIndex v : succ[u])
            if (--indegree[v] == 0) ready.push(v);
    }

    // Paths from the virtual super-source (linked to every source) and to the super-sink.
    std::vector<PathCount> from_source(n), to_sink(n);
    for (NodeIndex u : topo) {
        if (pred[u].empty()) {
            from_source[u] = 1;
        } else {
            for (NodeIndex p : pred[u]) from_source[u] += from_source[p];
        }
    }
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        const NodeIndex u = *it;
        if (succ[u].empty()) {
            to_sink[u] = 1;
        } else {
            for (NodeIndex s : succ[u]) to_sink[u] += to_sink[s];
        }
    }
    for (auto& a : result.arcs) a.spc = from_source[a.from] * to_sink[a.to];
    return result;
}

MainPath main_path(const CitationNetwork& net) {
    auto counts = search_path_counts(net);
    if (counts.arcs.empty()) throw DataError("main path analysis needs at least one citation");

    const std::size_t n = net.size();
    std::vector<std::vector<const FlowArc*>> out(n);
    std::vector<bool> has_pred(n, false);
    for (const auto& a : counts.arcs) {
        out[a.from].push_back(&a);
        has_pred[a.to] = true;
    }
    auto better = [&](const FlowArc* a, const FlowArc* b) {
        if (a->spc != b->spc) return a->spc > b->spc;
        const auto& ta = net.doc(a->from).id;
        const auto& tb = net.doc(b->from).id;
        if (ta != tb) return ta < tb;
        return net.doc(a->to).id < net.doc(b->to).id;
    };

    const FlowArc* step = nullptr;
    for (const auto& a : counts.arcs)
        if (!has_pred[a.from] && (step == nullptr || better(&a, step))) step = &a;

    MainPath path;
    path.nodes.push_back(step->from);
    while (step != nullptr) {
        path.nodes.push_back(step->to);
        path.spc.push_back(step->spc);
        const FlowArc* next = nullptr;
        for (const FlowArc* a : out[step->to])
            if (next == nullptr || better(a, next)) next = a;
        step = next;
    }
    path.removed = std::move(counts.removed);
    path.warnings = std::move(counts.warnings);
    return path;
}

} // namespace ktmap
