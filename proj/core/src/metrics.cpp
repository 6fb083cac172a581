#include "ktmap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "ktmap/error.hpp"
#include "ktmap/parallel.hpp"

namespace ktmap {
namespace {

void check_node(const Graph& graph, NodeIndex node) {
    if (node >= graph.node_count()) throw UsageError("unknown node " + std::to_string(node));
}

void check_labels(const Graph& graph, std::span<const std::size_t> labels) {
    if (labels.size() != graph.node_count()) throw UsageError("partition does not cover the graph's nodes");
}

// Internal degree of every member of `front`, used for the z-score.
std::vector<std::size_t> internal_degrees(const Graph& graph, std::span<const std::size_t> labels,
                                          std::size_t front) {
    std::vector<std::size_t> out;
    for (NodeIndex i = 0; i < graph.node_count(); ++i) {
        if (labels[i] != front) continue;
        std::size_t inside = 0;
        for (const auto& n : graph.neighbors(i)) inside += labels[n.node] == front;
        out.push_back(inside);
    }
    return out;
}

} // namespace

std::optional<double> clustering_coefficient(const Graph& graph, NodeIndex node) {
    check_node(graph, node);
    const auto nbrs = graph.neighbors(node);
    const std::size_t k = nbrs.size();
    if (k < 2) return std::nullopt;
    std::size_t links = 0;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b) links += graph.has_edge(nbrs[a].node, nbrs[b].node);
    return 2.0 * static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1));
}

ScalingFit ck_scaling(const Graph& graph, const ScalingOptions& options) {
    if (options.first_degree < 2) throw UsageError("scaling bins must start at degree >= 2");
    ScalingFit fit;
    std::map<std::size_t, std::pair<double, std::size_t>> by_bin;  // bin low edge -> (sum c, count)
    std::map<std::size_t, std::size_t> bin_high;
    for (NodeIndex i = 0; i < graph.node_count(); ++i) {
        const std::size_t k = graph.degree(i);
        const auto c = clustering_coefficient(graph, i);
        if (!c) {
            ++fit.excluded_nodes;
            continue;
        }
        if (k < options.first_degree) continue;
        std::size_t low = k, high = k + 1;
        if (options.binning == Binning::Log2) {
            low = options.first_degree;
            high = low * 2;
            while (k >= high) {
                low = high;
                high *= 2;
            }
        }
        auto& slot = by_bin[low];
        slot.first += *c;
        ++slot.second;
        bin_high[low] = high;
    }

    std::vector<double> xs, ys;
    for (const auto& [low, acc] : by_bin) {
        ScalingBin bin;
        bin.k_low = low;
        bin.k_high = bin_high[low];
        bin.nodes = acc.second;
        bin.center = std::sqrt(static_cast<double>(low) * static_cast<double>(bin.k_high - 1));
        bin.mean_c = acc.first / static_cast<double>(acc.second);
        fit.bins.push_back(bin);
        if (bin.mean_c > 0.0) {
            xs.push_back(std::log(bin.center));
            ys.push_back(std::log(bin.mean_c));
        }
    }
    fit.n_bins = xs.size();
    if (fit.n_bins < 3)
        throw DataError("C(k) scaling needs at least three degree bins with non-zero clustering (found " +
                        std::to_string(fit.n_bins) + ")");

    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

double participation_coefficient(const Graph& graph, NodeIndex node, std::span<const std::size_t> labels) {
    check_node(graph, node);
    check_labels(graph, labels);
    const auto nbrs = graph.neighbors(node);
    if (nbrs.empty()) throw DataError("participation coefficient is undefined for an isolated node");
    std::map<std::size_t, std::size_t> per_front;
    for (const auto& n : nbrs) ++per_front[labels[n.node]];
    const double k = static_cast<double>(nbrs.size());
    double sum = 0.0;
    for (const auto& [front, count] : per_front) {
        const double share = static_cast<double>(count) / k;
        sum += share * share;
    }
    return std::max(0.0, 1.0 - sum);
}

std::optional<double> within_module_z(const Graph& graph, NodeIndex node, std::span<const std::size_t> labels) {
    check_node(graph, node);
    check_labels(graph, labels);
    const std::size_t front = labels[node];
    const auto degrees = internal_degrees(graph, labels, front);
    if (degrees.size() < 2) return std::nullopt;

    const double n = static_cast<double>(degrees.size());
    double mean = 0.0;
    for (auto d : degrees) mean += static_cast<double>(d);
    mean /= n;
    double var = 0.0;
    for (auto d : degrees) var += (static_cast<double>(d) - mean) * (static_cast<double>(d) - mean);
    var /= n;
    if (var <= 0.0) return std::nullopt;

    std::size_t own = 0;
    for (const auto& nb : graph.neighbors(node)) own += labels[nb.node] == front;
    return (static_cast<double>(own) - mean) / std::sqrt(var);
}

std::vector<NodeMetrics> node_metrics(const Graph& graph, std::span<const std::size_t> labels, unsigned threads) {
    check_labels(graph, labels);
    std::size_t fronts = 0;
    for (auto l : labels) fronts = std::max(fronts, l + 1);

    // Per-front mean and population variance of internal degree, computed once.
    std::vector<double> mean(fronts, 0.0), var(fronts, 0.0);
    std::vector<std::size_t> size(fronts, 0), own(graph.node_count(), 0);
    for (NodeIndex i = 0; i < graph.node_count(); ++i) {
        for (const auto& n : graph.neighbors(i)) own[i] += labels[n.node] == labels[i];
        mean[labels[i]] += static_cast<double>(own[i]);
        ++size[labels[i]];
    }
    for (std::size_t f = 0; f < fronts; ++f)
        if (size[f] > 0) mean[f] /= static_cast<double>(size[f]);
    for (NodeIndex i = 0; i < graph.node_count(); ++i) {
        const double d = static_cast<double>(own[i]) - mean[labels[i]];
        var[labels[i]] += d * d;
    }
    for (std::size_t f = 0; f < fronts; ++f)
        if (size[f] > 0) var[f] /= static_cast<double>(size[f]);

    std::vector<NodeMetrics> out(graph.node_count());
    parallel_for(graph.node_count(), threads, [&](std::size_t i) {
        auto& m = out[i];
        m.degree = graph.degree(i);
        m.clustering = clustering_coefficient(graph, i);
        if (m.degree > 0) m.participation = participation_coefficient(graph, i, labels);
        const std::size_t f = labels[i];
        if (size[f] >= 2 && var[f] > 0.0)
            m.within_module_z = (static_cast<double>(own[i]) - mean[f]) / std::sqrt(var[f]);
    });
    return out;
}

} // namespace ktmap
