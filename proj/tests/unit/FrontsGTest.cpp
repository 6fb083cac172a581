#include <gtest/gtest.h>

#include <set>

#include "ktmap/error.hpp"
#include "ktmap/fronts.hpp"
#include "ktmap/random.hpp"
#include "ktmap/synth.hpp"
#include "oracles.hpp"

namespace ktmap {
namespace {

class FrontsGTest : public testing::Test {};

std::vector<oracle::Edge> plain(const Graph& g) {
    std::vector<oracle::Edge> out;
    for (const auto& e : g.edges()) out.push_back({e.u, e.v, e.weight});
    return out;
}

Graph graph_of(std::size_t n, const std::vector<std::pair<NodeIndex, NodeIndex>>& pairs) {
    std::vector<WeightedEdge> edges;
    for (const auto& [u, v] : pairs) edges.push_back({u, v, 1.0});
    return Graph::from_edges(n, edges);
}

Graph two_triangles() { return graph_of(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}); }

Graph random_graph(std::size_t n, double p, Rng& rng, bool weighted = false) {
    std::vector<WeightedEdge> edges;
    for (NodeIndex u = 0; u < n; ++u)
        for (NodeIndex v = u + 1; v < n; ++v)
            if (rng.bernoulli(p)) edges.push_back({u, v, weighted ? 1.0 + static_cast<double>(rng.below(4)) : 1.0});
    return Graph::from_edges(n, edges);
}

TEST_F(FrontsGTest, testModularityExamples) {
    const auto g = two_triangles();
    EXPECT_NEAR(modularity(g, std::vector<std::size_t>(6, 0)), 0.0, 1e-15);
    EXPECT_NEAR(modularity(g, std::vector<std::size_t>{0, 0, 0, 1, 1, 1}), 0.5, 1e-15);
    EXPECT_LT(modularity(g, std::vector<std::size_t>{0, 0, 1, 1, 1, 1}), 0.5);
}

TEST_F(FrontsGTest, testModularityErrors) {
    EXPECT_THROW(modularity(Graph(3), std::vector<std::size_t>(3, 0)), DataError);
    EXPECT_THROW(modularity(two_triangles(), std::vector<std::size_t>(4, 0)), UsageError);
    EXPECT_THROW(fast_greedy(Graph(4)), DataError);
}

TEST_F(FrontsGTest, testModularityMatchesDefinitionOnRandomWeightedGraphs) {
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 3 + rng.below(10);
        const auto g = random_graph(n, 0.4, rng, true);
        if (g.edge_count() == 0) continue;
        std::vector<std::size_t> labels(n);
        for (auto& l : labels) l = rng.below(4);
        EXPECT_NEAR(modularity(g, labels), oracle::modularity(n, plain(g), normalize_labels(labels)), 1e-12);
    }
}

TEST_F(FrontsGTest, testTwoTrianglesRecovered) {
    const auto p = fast_greedy(two_triangles());
    EXPECT_EQ(p.labels, (std::vector<std::size_t>{0, 0, 0, 1, 1, 1}));
    EXPECT_NEAR(p.q, 0.5, 1e-12);
    EXPECT_NEAR(oracle::best_modularity(6, plain(two_triangles())), 0.5, 1e-12);
}

TEST_F(FrontsGTest, testCompleteGraphStaysWhole) {
    std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
    for (NodeIndex u = 0; u < 5; ++u)
        for (NodeIndex v = u + 1; v < 5; ++v) pairs.emplace_back(u, v);
    const auto g = graph_of(5, pairs);
    for (auto refinement : {Refinement::None, Refinement::VertexMoves, Refinement::KernighanLin}) {
        const auto p = fast_greedy(g, refinement);
        EXPECT_EQ(p.front_count(), 1u);
        EXPECT_NEAR(p.q, 0.0, 1e-15);
    }
    EXPECT_NEAR(oracle::best_modularity(5, plain(g)), 0.0, 1e-12);
}

TEST_F(FrontsGTest, testIsolatedNodesAreSingletons) {
    const auto g = graph_of(8, {{0, 1}, {1, 2}, {0, 2}, {4, 5}, {5, 6}, {4, 6}});
    const auto p = fast_greedy(g);
    EXPECT_EQ(p.front_count(), 4u);
    EXPECT_NE(p.labels[3], p.labels[0]);
    EXPECT_NE(p.labels[3], p.labels[4]);
    EXPECT_NE(p.labels[7], p.labels[3]);
}

TEST_F(FrontsGTest, testNearOptimalOnSmallGraphs) {
    Rng rng(99);
    int checked = 0;
    while (checked < 40) {
        const std::size_t n = 4 + rng.below(5);
        const auto g = random_graph(n, 0.45, rng);
        if (g.edge_count() == 0) continue;
        const double best = oracle::best_modularity(n, plain(g));
        for (auto refinement : {Refinement::None, Refinement::VertexMoves, Refinement::KernighanLin}) {
            const auto p = fast_greedy(g, refinement);
            EXPECT_NEAR(p.q, oracle::modularity(n, plain(g), p.labels), 1e-12);
            EXPECT_GE(p.q, -1e-12);  // never worse than one all-inclusive front
            if (refinement == Refinement::KernighanLin) EXPECT_GE(p.q + 1e-12, 0.9 * best) << "n=" << n;
        }
        ++checked;
    }
}

TEST_F(FrontsGTest, testRefinementNeverLowersModularity) {
    Rng rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = random_graph(30, 0.15, rng);
        if (g.edge_count() == 0) continue;
        std::vector<std::size_t> labels(30);
        for (auto& l : labels) l = rng.below(5);
        const double before = modularity(g, labels);
        const auto refined = refine_by_moves(g, labels);
        EXPECT_GE(modularity(g, refined) + 1e-12, before);
        EXPECT_EQ(refined, normalize_labels(refined));
        const auto swapped = refine_kernighan_lin(g, labels);
        EXPECT_GE(modularity(g, swapped) + 1e-12, before);
        EXPECT_EQ(swapped, normalize_labels(swapped));
        // No single move improves a Kernighan-Lin result.
        EXPECT_EQ(refine_by_moves(g, swapped), swapped);
    }
}

TEST_F(FrontsGTest, testGreedyIsDeterministic) {
    const auto corpus = gen_planted_kt_network({}, 3);
    const auto a = fast_greedy(corpus.network.projection());
    const auto b = fast_greedy(corpus.network.projection());
    EXPECT_EQ(a.labels, b.labels);
    EXPECT_EQ(a.q, b.q);
}

TEST_F(FrontsGTest, testPlantedBlocksRecovered) {
    const auto corpus = gen_planted_kt_network({}, 1);
    const auto p = fast_greedy(corpus.network.projection());
    EXPECT_GE(normalized_mutual_information(p.labels, corpus.truth.leaf_labels()), 0.9);
}

TEST_F(FrontsGTest, testNormalizeLabels) {
    const std::vector<std::size_t> raw{7, 7, 2, 9, 2};
    EXPECT_EQ(normalize_labels(raw), (std::vector<std::size_t>{0, 0, 1, 2, 1}));
}

TEST_F(FrontsGTest, testSizeFloorStopsRecursion) {
    const auto tree = hierarchical_fronts(two_triangles(), {4, 4, 0.05, 1});
    EXPECT_EQ(tree.depth(), 2u);
    EXPECT_EQ(tree.fronts_at(2).size(), 2u);
    EXPECT_EQ(tree.path_of(0), "1");
    EXPECT_EQ(tree.path_of(5), "2");
    EXPECT_TRUE(tree.fronts()[0].path.empty());
    EXPECT_NEAR(*tree.fronts()[0].split_q, 0.5, 1e-12);
}

TEST_F(FrontsGTest, testDepthCapGivesFlatPartition) {
    PlantedConfig config;
    config.branching = {2, 2};
    config.leaf_size = 20;
    config.p_within = {0.4, 0.9};
    config.p_between = 0.02;
    const auto corpus = gen_planted_kt_network(config, 4);
    const auto& g = corpus.network.projection();
    const auto tree = hierarchical_fronts(g, {2, 10, 0.05, 1});
    EXPECT_EQ(tree.depth(), 2u);
    EXPECT_EQ(tree.level_labels(2), fast_greedy(g).labels);
}

TEST_F(FrontsGTest, testNestedTreeRefinesAndIsThreadIndependent) {
    PlantedConfig config;
    config.branching = {2, 2};
    config.leaf_size = 20;
    config.p_within = {0.4, 0.9};
    config.p_between = 0.02;
    const auto corpus = gen_planted_kt_network(config, 9);
    const auto& g = corpus.network.projection();
    const auto tree = hierarchical_fronts(g, {4, 10, 0.05, 1});
    const auto threaded = hierarchical_fronts(g, {4, 10, 0.05, 4});
    ASSERT_GE(tree.depth(), 3u);
    ASSERT_EQ(tree.fronts().size(), threaded.fronts().size());
    for (std::size_t f = 0; f < tree.fronts().size(); ++f) {
        EXPECT_EQ(tree.fronts()[f].path, threaded.fronts()[f].path);
        EXPECT_EQ(tree.fronts()[f].members, threaded.fronts()[f].members);
        EXPECT_EQ(tree.fronts()[f].split_q, threaded.fronts()[f].split_q);
    }
    for (std::size_t level = 3; level <= tree.depth(); ++level) {
        const auto upper = tree.level_labels(level - 1);
        const auto lower = tree.level_labels(level);
        std::vector<std::set<std::size_t>> parents(g.node_count());
        for (NodeIndex i = 0; i < g.node_count(); ++i) parents[lower[i]].insert(upper[i]);
        for (const auto& p : parents) EXPECT_LE(p.size(), 1u);
    }
    std::vector<int> covered(g.node_count(), 0);
    for (const auto& f : tree.fronts())
        if (f.children.empty())
            for (auto i : f.members) ++covered[i];
    for (auto c : covered) EXPECT_EQ(c, 1);
    EXPECT_GE(normalized_mutual_information(tree.level_labels(2), corpus.truth.labels_at(1)), 0.9);
    EXPECT_GE(normalized_mutual_information(tree.level_labels(3), corpus.truth.labels_at(2)), 0.9);
}

TEST_F(FrontsGTest, testInvalidDepth) { EXPECT_THROW(hierarchical_fronts(two_triangles(), {1, 10, 0.05, 1}), UsageError); }

} // namespace
} // namespace ktmap
