#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ktmap/corpus.hpp"

namespace ktmap {

/// Nested planted blocks. Depth D = branching.size(); a pair of nodes whose
/// deepest common block sits at depth L >= 1 links with p_within[L - 1], pairs
/// sharing only the root link with p_between. Each rate is scaled by
/// (1 - homophily * |T_u - T_v|) using the planted leaf scores.
struct PlantedConfig {
    std::vector<std::size_t> branching{4};
    std::size_t leaf_size = 50;
    std::vector<double> p_within{0.10};
    double p_between = 0.005;
    double homophily = 0.0;
    std::size_t n_hubs = 0;
    /// Links from each hub into each of the two blocks it bridges.
    std::size_t hub_links = 16;
    std::size_t terms_per_doc = 20;
    /// Half-width of the uniform jitter applied to a document's target T.
    double term_noise = 0.05;

    std::size_t leaf_count() const;
    void validate() const;
};

struct GroundTruth {
    /// Per node, planted block index at depths 1..D (global numbering per depth).
    std::vector<std::vector<std::size_t>> front_path;
    std::vector<double> target_t;
    std::vector<NodeIndex> hubs;
    PlantedConfig config;
    std::uint64_t seed = 0;

    /// Labels at depth 1..D; hubs carry the labels of their first bridged block.
    std::vector<std::size_t> labels_at(std::size_t depth) const;
    std::vector<std::size_t> leaf_labels() const { return labels_at(config.branching.size()); }
};

struct SyntheticCorpus {
    CitationNetwork network;
    GroundTruth truth;
};

/// Planted hierarchical citation network with homophily and bridging hubs.
/// Node order is block-major with hubs last. Publication order is a seeded
/// random permutation; every citation points from the newer document to the
/// older one. A pure function of (config, seed).
SyntheticCorpus gen_planted_kt_network(const PlantedConfig& config, std::uint64_t seed);

/// Deterministic hierarchical model: a 5-clique replicated into 5 copies per
/// iteration, with the peripheral nodes of the 4 replicas wired to the central
/// hub. 5^iterations nodes.
CitationNetwork gen_deterministic_hierarchical(std::size_t iterations, std::size_t max_iterations = 6);

/// G(n, p): each unordered pair linked independently with probability p.
CitationNetwork gen_random_graph(std::size_t n, double p, std::uint64_t seed);

/// Normalised mutual information 2 I(A;B) / (H(A) + H(B)); 1 when both are trivial.
double normalized_mutual_information(std::span<const std::size_t> a, std::span<const std::size_t> b);

/// Ground truth as JSON (planted front paths, target T, hubs, config, seed).
std::string ground_truth_json(const CitationNetwork& net, const GroundTruth& truth);

} // namespace ktmap
