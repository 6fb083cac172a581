#include "ktmap/fronts.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>

#include "ktmap/error.hpp"
#include "ktmap/parallel.hpp"

namespace ktmap {

std::size_t Partition::front_count() const {
    std::size_t count = 0;
    for (auto l : labels) count = std::max(count, l + 1);
    return count;
}

std::vector<std::vector<NodeIndex>> Partition::members() const {
    std::vector<std::vector<NodeIndex>> out(front_count());
    for (NodeIndex i = 0; i < labels.size(); ++i) out[labels[i]].push_back(i);
    return out;
}

std::vector<std::size_t> normalize_labels(std::span<const std::size_t> labels) {
    std::unordered_map<std::size_t, std::size_t> remap;
    std::vector<std::size_t> out;
    out.reserve(labels.size());
    for (auto l : labels) out.push_back(remap.try_emplace(l, remap.size()).first->second);
    return out;
}

double modularity(const Graph& graph, std::span<const std::size_t> labels) {
    if (labels.size() != graph.node_count()) throw UsageError("partition does not cover the graph's nodes");
    if (graph.edge_count() == 0 || graph.total_weight() <= 0.0)
        throw DataError("modularity is undefined on a graph without edges");

    const auto dense = normalize_labels(labels);
    std::size_t fronts = 0;
    for (auto l : dense) fronts = std::max(fronts, l + 1);
    std::vector<double> internal(fronts, 0.0), ends(fronts, 0.0);
    for (const auto& e : graph.edges())
        if (dense[e.u] == dense[e.v]) internal[dense[e.u]] += e.weight;
    for (NodeIndex i = 0; i < graph.node_count(); ++i) ends[dense[i]] += graph.strength(i);

    const double w = graph.total_weight();
    double q = 0.0;
    for (std::size_t s = 0; s < fronts; ++s) {
        const double a = ends[s] / (2.0 * w);
        q += internal[s] / w - a * a;
    }
    return q;
}

namespace {

// Communities are identified by their smallest original member, and a merge
// keeps the smaller id, so community ids coincide with front ids in the
// tie-break rule. With integral weights every gain key below is an exact
// integer in double precision, which makes tie detection exact.
class Agglomerator {
public:
    explicit Agglomerator(const Graph& graph)
        : graph_(graph), two_w_(2.0 * graph.total_weight()), strength_(graph.node_count()),
          links_(graph.node_count()), best_(graph.node_count()), alive_(graph.node_count(), true) {
        for (NodeIndex i = 0; i < graph.node_count(); ++i) {
            strength_[i] = graph.strength(i);
            for (const auto& n : graph.neighbors(i)) links_[i][n.node] = n.weight;
        }
        for (NodeIndex i = 0; i < graph.node_count(); ++i) refresh(i);
    }

    /// Returns the merge sequence and the number of merges of the best cut.
    std::pair<std::vector<std::pair<NodeIndex, NodeIndex>>, std::size_t> run() {
        // scaled = 4 W^2 Q; each merge adds 2 * key.
        double scaled = 0.0;
        for (NodeIndex i = 0; i < strength_.size(); ++i) scaled -= strength_[i] * strength_[i];
        double best_scaled = scaled;
        std::size_t best_cut = 0;
        std::vector<std::pair<NodeIndex, NodeIndex>> merges;

        while (true) {
            std::optional<std::pair<NodeIndex, NodeIndex>> pick;
            double pick_key = 0.0;
            for (NodeIndex i = 0; i < best_.size(); ++i) {
                if (!alive_[i] || !best_[i]) continue;
                const auto [key, j] = *best_[i];
                const std::pair<NodeIndex, NodeIndex> pair{std::min(i, j), std::max(i, j)};
                if (!pick || key > pick_key || (key == pick_key && pair < *pick)) {
                    pick = pair;
                    pick_key = key;
                }
            }
            if (!pick) break;
            merge(pick->first, pick->second);
            merges.push_back(*pick);
            scaled += 2.0 * pick_key;
            if (scaled >= best_scaled) {
                best_scaled = scaled;
                best_cut = merges.size();
            }
        }
        return {std::move(merges), best_cut};
    }

private:
    double key(NodeIndex i, NodeIndex j, double weight) const {
        return two_w_ * weight - strength_[i] * strength_[j];
    }

    void refresh(NodeIndex i) {
        best_[i].reset();
        for (const auto& [j, w] : links_[i]) {
            const double k = key(i, j, w);
            if (!best_[i] || k > best_[i]->first) best_[i] = {k, j};  // map order keeps the smallest j on ties
        }
    }

    void merge(NodeIndex a, NodeIndex b) {
        auto absorbed = std::move(links_[b]);
        links_[b].clear();
        alive_[b] = false;
        best_[b].reset();
        strength_[a] += strength_[b];
        links_[a].erase(b);
        absorbed.erase(a);
        for (const auto& [k, w] : absorbed) {
            links_[a][k] += w;
            links_[k].erase(b);
        }
        for (const auto& [k, w] : links_[a]) links_[k][a] = w;
        refresh(a);
        for (const auto& [k, w] : links_[a]) refresh(k);
    }

    const Graph& graph_;
    double two_w_;
    std::vector<double> strength_;
    std::vector<std::map<NodeIndex, double>> links_;
    std::vector<std::optional<std::pair<double, NodeIndex>>> best_;
    std::vector<bool> alive_;
};

NodeIndex find_root(std::vector<NodeIndex>& parent, NodeIndex x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
}

} // namespace

std::vector<std::size_t> refine_by_moves(const Graph& graph, std::span<const std::size_t> labels,
                                         std::size_t max_sweeps) {
    if (labels.size() != graph.node_count()) throw UsageError("label vector does not match the graph");
    const double m = graph.total_weight();
    if (m <= 0.0) throw DataError("refinement needs a graph with at least one edge");
    std::vector<std::size_t> out(labels.begin(), labels.end());
    std::size_t fronts = 0;
    for (auto l : out) fronts = std::max(fronts, l + 1);
    std::vector<double> total(fronts, 0.0);
    for (NodeIndex i = 0; i < out.size(); ++i) total[out[i]] += graph.strength(i);

    std::map<std::size_t, double> links;
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        bool moved = false;
        for (NodeIndex i = 0; i < out.size(); ++i) {
            const double k = graph.strength(i);
            if (k <= 0.0) continue;
            links.clear();
            for (const auto& nb : graph.neighbors(i)) links[out[nb.node]] += nb.weight;
            const std::size_t from = out[i];
            total[from] -= k;
            const double stay = links[from] - k * total[from] / (2.0 * m);
            std::size_t best = from;
            double best_gain = 0.0;
            for (const auto& [front, w] : links) {
                if (front == from) continue;
                const double gain = w - k * total[front] / (2.0 * m) - stay;
                // Relative guard so rounding noise never triggers a move.
                if (gain > best_gain + 1e-12 * m) {
                    best = front;
                    best_gain = gain;
                }
            }
            total[best] += k;
            if (best != from) {
                out[i] = best;
                moved = true;
            }
        }
        if (!moved) break;
    }
    return normalize_labels(out);
}

std::vector<std::size_t> refine_kernighan_lin(const Graph& graph, std::span<const std::size_t> labels,
                                              std::size_t patience, std::size_t max_passes) {
    if (labels.size() != graph.node_count()) throw UsageError("label vector does not match the graph");
    const double m = graph.total_weight();
    if (m <= 0.0) throw DataError("refinement needs a graph with at least one edge");
    const std::size_t n = labels.size();
    auto best = normalize_labels(labels);
    double best_q = modularity(graph, best);

    // Dense labels stay below n, so n + 1 slots always leave a free front id.
    std::vector<double> total(n + 1), links(n + 1, 0.0);
    std::vector<std::size_t> count(n + 1);
    std::vector<std::size_t> touched;
    for (std::size_t pass = 0; pass < max_passes; ++pass) {
        auto cur = best;
        std::fill(total.begin(), total.end(), 0.0);
        std::fill(count.begin(), count.end(), 0);
        for (NodeIndex i = 0; i < n; ++i) {
            total[cur[i]] += graph.strength(i);
            ++count[cur[i]];
        }
        std::vector<bool> locked(n, false);
        double q = best_q, pass_q = best_q;
        std::vector<std::size_t> pass_labels;
        for (std::size_t step = 0, stale = 0; step < n && stale < patience; ++step) {
            std::size_t fresh = 0;
            while (count[fresh] > 0) ++fresh;
            std::optional<double> gain;
            NodeIndex node = 0;
            std::size_t target = 0;
            for (NodeIndex i = 0; i < n; ++i) {
                const double k = graph.strength(i);
                if (locked[i] || k <= 0.0) continue;
                touched.clear();
                for (const auto& nb : graph.neighbors(i)) {
                    if (links[cur[nb.node]] == 0.0) touched.push_back(cur[nb.node]);
                    links[cur[nb.node]] += nb.weight;
                }
                const std::size_t from = cur[i];
                const double stay = links[from] - k * (total[from] - k) / (2.0 * m);
                std::sort(touched.begin(), touched.end());
                auto consider = [&](std::size_t front, double g) {
                    if (!gain || g > *gain + 1e-14) {
                        gain = g;
                        node = i;
                        target = front;
                    }
                };
                for (auto front : touched)
                    if (front != from) consider(front, (links[front] - k * total[front] / (2.0 * m) - stay) / m);
                if (count[from] > 1) consider(fresh, -stay / m);
                for (auto front : touched) links[front] = 0.0;
            }
            if (!gain) break;
            const double k = graph.strength(node);
            total[cur[node]] -= k;
            --count[cur[node]];
            total[target] += k;
            ++count[target];
            cur[node] = target;
            locked[node] = true;
            q += *gain;
            if (q > pass_q + 1e-12) {
                pass_q = q;
                pass_labels = cur;
                stale = 0;
            } else {
                ++stale;
            }
        }
        if (pass_labels.empty()) break;
        best = normalize_labels(pass_labels);
        // Recomputed rather than accumulated so rounding drift cannot build up across passes.
        best_q = modularity(graph, best);
    }
    return best;
}

Partition fast_greedy(const Graph& graph, Refinement refinement) {
    if (graph.edge_count() == 0) throw DataError("fast_greedy needs a graph with at least one edge");
    Agglomerator agglomerator(graph);
    const auto [merges, cut] = agglomerator.run();

    auto labels_after = [&, &merges = merges](std::size_t count) {
        std::vector<NodeIndex> parent(graph.node_count());
        std::iota(parent.begin(), parent.end(), NodeIndex{0});
        for (std::size_t m = 0; m < count; ++m) {
            const auto a = find_root(parent, merges[m].first);
            const auto b = find_root(parent, merges[m].second);
            parent[std::max(a, b)] = std::min(a, b);
        }
        std::vector<std::size_t> raw(graph.node_count());
        for (NodeIndex i = 0; i < raw.size(); ++i) raw[i] = find_root(parent, i);
        return normalize_labels(raw);
    };

    Partition p;
    switch (refinement) {
    case Refinement::None: p.labels = labels_after(cut); break;
    case Refinement::VertexMoves: p.labels = refine_by_moves(graph, labels_after(cut)); break;
    case Refinement::KernighanLin: {
        std::optional<double> best_q;
        // Order cut, cut - 1, cut + 1, cut - 2, cut + 2.
        for (int offset : {0, -1, 1, -2, 2}) {
            const auto count = static_cast<std::ptrdiff_t>(cut) + offset;
            if (count < 0 || count > static_cast<std::ptrdiff_t>(merges.size())) continue;
            auto labels = refine_kernighan_lin(graph, labels_after(static_cast<std::size_t>(count)));
            const double q = modularity(graph, labels);
            if (!best_q || q > *best_q + 1e-12) {
                best_q = q;
                p.labels = std::move(labels);
            }
        }
        break;
    }
    }
    p.q = modularity(graph, p.labels);
    return p;
}

FrontTree::FrontTree(std::vector<Front> fronts, std::size_t node_count)
    : fronts_(std::move(fronts)), leaf_of_(node_count, static_cast<std::size_t>(-1)) {
    for (std::size_t f = 0; f < fronts_.size(); ++f) {
        depth_ = std::max(depth_, fronts_[f].level);
        if (!fronts_[f].children.empty()) continue;
        for (auto i : fronts_[f].members) leaf_of_.at(i) = f;
    }
    for (auto f : leaf_of_)
        if (f == static_cast<std::size_t>(-1)) throw DataError("front tree leaves do not cover every node");
}

std::size_t FrontTree::front_at(NodeIndex i, std::size_t level) const {
    std::size_t f = leaf_of(i);
    while (fronts_[f].level > level && fronts_[f].parent) f = *fronts_[f].parent;
    return f;
}

std::vector<std::size_t> FrontTree::level_labels(std::size_t level) const {
    std::vector<std::size_t> raw(node_count());
    for (NodeIndex i = 0; i < raw.size(); ++i) raw[i] = front_at(i, level);
    return normalize_labels(raw);
}

std::vector<std::size_t> FrontTree::fronts_at(std::size_t level) const {
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < fronts_.size(); ++f)
        if (fronts_[f].level == level) out.push_back(f);
    return out;
}

namespace {

struct Split {
    double q = 0.0;
    std::vector<std::vector<NodeIndex>> groups;  // in parent-graph indices
};

std::optional<Split> try_split(const Graph& graph, const std::vector<NodeIndex>& members,
                               const HierarchyOptions& options) {
    if (members.size() < std::max<std::size_t>(options.min_front_size, 2)) return std::nullopt;
    const auto sub = induced_subgraph(graph, members);
    if (sub.graph.edge_count() == 0) return std::nullopt;
    const auto partition = fast_greedy(sub.graph, options.refinement);
    if (partition.front_count() < 2 || partition.q < options.min_q_gain) return std::nullopt;
    Split split;
    split.q = partition.q;
    for (const auto& local : partition.members()) {
        auto& group = split.groups.emplace_back();
        for (auto i : local) group.push_back(sub.origin[i]);
    }
    return split;
}

} // namespace

FrontTree hierarchical_fronts(const Graph& graph, const HierarchyOptions& options) {
    if (options.max_depth < 2) throw UsageError("max_depth must be at least 2");

    std::vector<Front> fronts;
    Front root;
    root.members.resize(graph.node_count());
    std::iota(root.members.begin(), root.members.end(), NodeIndex{0});
    const auto top = fast_greedy(graph, options.refinement);
    root.split_q = top.q;
    fronts.push_back(std::move(root));

    std::vector<std::size_t> frontier;
    std::size_t index = 1;
    for (auto& group : top.members()) {
        Front f;
        f.path = std::to_string(index++);
        f.level = 2;
        f.parent = 0;
        f.members = std::move(group);
        fronts[0].children.push_back(fronts.size());
        frontier.push_back(fronts.size());
        fronts.push_back(std::move(f));
    }

    for (std::size_t level = 3; level <= options.max_depth && !frontier.empty(); ++level) {
        // Siblings are disjoint, so their splits run independently; results land
        // in per-front slots and are attached in front order.
        std::vector<std::optional<Split>> splits(frontier.size());
        parallel_for(frontier.size(), options.threads,
                     [&](std::size_t k) { splits[k] = try_split(graph, fronts[frontier[k]].members, options); });

        std::vector<std::size_t> next;
        for (std::size_t k = 0; k < frontier.size(); ++k) {
            if (!splits[k]) continue;
            const std::size_t parent = frontier[k];
            fronts[parent].split_q = splits[k]->q;
            std::size_t child_index = 1;
            for (auto& group : splits[k]->groups) {
                Front f;
                f.path = fronts[parent].path + "." + std::to_string(child_index++);
                f.level = level;
                f.parent = parent;
                f.members = std::move(group);
                fronts[parent].children.push_back(fronts.size());
                next.push_back(fronts.size());
                fronts.push_back(std::move(f));
            }
        }
        frontier = std::move(next);
    }
    return FrontTree(std::move(fronts), graph.node_count());
}

} // namespace ktmap
