#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ktmap/graph.hpp"

namespace ktmap {

/// Local clustering coefficient 2 t / (k (k - 1)); empty when k < 2.
std::optional<double> clustering_coefficient(const Graph& graph, NodeIndex node);

enum class Binning { Log2, None };

struct ScalingOptions {
    Binning binning = Binning::Log2;
    /// Lower edge of the first bin.
    std::size_t first_degree = 2;
};

struct ScalingBin {
    std::size_t k_low = 0;   // inclusive
    std::size_t k_high = 0;  // exclusive
    std::size_t nodes = 0;
    double center = 0.0;  // geometric centre of [k_low, k_high - 1]
    double mean_c = 0.0;
};

/// Least-squares fit of log(mean c) against log(bin centre).
struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t n_bins = 0;
    /// Nodes left out because their coefficient is undefined (k < 2).
    std::size_t excluded_nodes = 0;
    std::vector<ScalingBin> bins;
};

/// C(k) scaling: bins nodes by degree, averages c per bin and fits a power
/// law through the bin means. Bins with zero mean c cannot enter the log fit
/// and are dropped. DataError when fewer than three bins remain.
ScalingFit ck_scaling(const Graph& graph, const ScalingOptions& options = {});

/// P = 1 - sum_s (k_is / k_i)^2 over the fronts of the node's neighbours.
/// DataError for an isolated node.
double participation_coefficient(const Graph& graph, NodeIndex node, std::span<const std::size_t> labels);

/// z-score of the node's internal degree against its front (population stddev);
/// empty when the front has fewer than two members or zero spread.
std::optional<double> within_module_z(const Graph& graph, NodeIndex node, std::span<const std::size_t> labels);

struct NodeMetrics {
    std::size_t degree = 0;
    std::optional<double> clustering;
    std::optional<double> participation;  // empty for isolated nodes
    std::optional<double> within_module_z;
};

/// All per-node metrics; nodes are independent and split across `threads`.
std::vector<NodeMetrics> node_metrics(const Graph& graph, std::span<const std::size_t> labels,
                                      unsigned threads = 1);

} // namespace ktmap
