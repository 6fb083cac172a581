#include <gtest/gtest.h>

#include <numeric>

#include "ktmap/error.hpp"
#include "ktmap/metrics.hpp"
#include "ktmap/random.hpp"
#include "ktmap/synth.hpp"
#include "oracles.hpp"

namespace ktmap {
namespace {

class MetricsGTest : public testing::Test {};

Graph graph_of(std::size_t n, const std::vector<std::pair<NodeIndex, NodeIndex>>& pairs) {
    std::vector<WeightedEdge> edges;
    for (const auto& [u, v] : pairs) edges.push_back({u, v, 1.0});
    return Graph::from_edges(n, edges);
}

Graph star(std::size_t leaves) {
    std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
    for (NodeIndex i = 1; i <= leaves; ++i) pairs.emplace_back(0, i);
    return graph_of(leaves + 1, pairs);
}

TEST_F(MetricsGTest, testClusteringExamples) {
    const auto triangle = graph_of(3, {{0, 1}, {1, 2}, {0, 2}});
    EXPECT_EQ(clustering_coefficient(triangle, 0), 1.0);
    EXPECT_EQ(clustering_coefficient(star(5), 0), 0.0);
    const auto path = graph_of(3, {{0, 1}, {1, 2}});
    EXPECT_EQ(clustering_coefficient(path, 1), 0.0);
    EXPECT_FALSE(clustering_coefficient(path, 0).has_value());
    EXPECT_FALSE(clustering_coefficient(path, 2).has_value());
    EXPECT_THROW(clustering_coefficient(path, 3), UsageError);
}

TEST_F(MetricsGTest, testClusteringMatchesTriangleCount) {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 5 + rng.below(46);
        const double p = 0.05 + 0.5 * rng.uniform();
        std::vector<oracle::Edge> plain;
        std::vector<WeightedEdge> edges;
        for (NodeIndex u = 0; u < n; ++u)
            for (NodeIndex v = u + 1; v < n; ++v)
                if (rng.bernoulli(p)) {
                    plain.push_back({u, v});
                    edges.push_back({u, v});
                }
        const auto g = Graph::from_edges(n, edges);
        const auto a = oracle::adjacency(n, plain);
        for (NodeIndex i = 0; i < n; ++i) {
            const double ref = oracle::clustering(a, i);
            const auto c = clustering_coefficient(g, i);
            if (ref < 0) {
                EXPECT_FALSE(c.has_value());
            } else {
                ASSERT_TRUE(c.has_value());
                EXPECT_EQ(*c, ref);
            }
        }
    }
}

TEST_F(MetricsGTest, testParticipationExamples) {
    // Node 0 linked to 1..4; fronts chosen per case.
    const auto g = star(4);
    EXPECT_EQ(participation_coefficient(g, 0, std::vector<std::size_t>{0, 0, 0, 0, 0}), 0.0);
    EXPECT_EQ(participation_coefficient(g, 0, std::vector<std::size_t>{0, 0, 0, 0, 1}), 0.375);
    const auto two = graph_of(3, {{0, 1}, {0, 2}});
    EXPECT_EQ(participation_coefficient(two, 0, std::vector<std::size_t>{0, 0, 1}), 0.5);
    const auto isolated = graph_of(3, {{0, 1}});
    EXPECT_THROW(participation_coefficient(isolated, 2, std::vector<std::size_t>{0, 0, 1}), DataError);
    EXPECT_THROW(participation_coefficient(g, 0, std::vector<std::size_t>{0, 0}), UsageError);
}

TEST_F(MetricsGTest, testParticipationPermutationInvariantAndBounded) {
    Rng rng(12);
    std::vector<WeightedEdge> edges;
    for (NodeIndex u = 0; u < 30; ++u)
        for (NodeIndex v = u + 1; v < 30; ++v)
            if (rng.bernoulli(0.2)) edges.push_back({u, v});
    const auto g = Graph::from_edges(30, edges);
    std::vector<std::size_t> labels(30), permuted(30);
    const std::vector<std::size_t> perm{3, 0, 4, 1, 2};
    for (NodeIndex i = 0; i < 30; ++i) {
        labels[i] = rng.below(5);
        permuted[i] = perm[labels[i]];
    }
    for (NodeIndex i = 0; i < 30; ++i) {
        if (g.degree(i) == 0) continue;
        const double p = participation_coefficient(g, i, labels);
        EXPECT_DOUBLE_EQ(p, participation_coefficient(g, i, permuted));
        std::set<std::size_t> touched;
        for (const auto& n : g.neighbors(i)) touched.insert(labels[n.node]);
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0 - 1.0 / static_cast<double>(touched.size()) + 1e-15);
    }
}

TEST_F(MetricsGTest, testWithinModuleZ) {
    const auto g = star(5);
    const std::vector<std::size_t> one(6, 0);
    EXPECT_GT(*within_module_z(g, 0, one), 0.0);
    EXPECT_LT(*within_module_z(g, 3, one), 0.0);

    const auto cycle = graph_of(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    EXPECT_FALSE(within_module_z(cycle, 0, std::vector<std::size_t>(4, 0)).has_value());

    // Node 3 sits in front 0 but links only outside it.
    const auto g2 = graph_of(5, {{0, 1}, {1, 2}, {0, 2}, {3, 4}});
    const std::vector<std::size_t> labels{0, 0, 0, 0, 1};
    EXPECT_LT(*within_module_z(g2, 3, labels), 0.0);
    EXPECT_FALSE(within_module_z(g2, 4, labels).has_value());  // singleton front
}

TEST_F(MetricsGTest, testNodeMetricsAgreeWithSingleCalls) {
    const auto corpus = gen_planted_kt_network({}, 2);
    const auto& g = corpus.network.projection();
    const auto labels = corpus.truth.leaf_labels();
    const auto all = node_metrics(g, labels, 1);
    const auto threaded = node_metrics(g, labels, 3);
    ASSERT_EQ(all.size(), g.node_count());
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        EXPECT_EQ(all[i].degree, g.degree(i));
        EXPECT_EQ(all[i].clustering, clustering_coefficient(g, i));
        if (g.degree(i) > 0) EXPECT_EQ(*all[i].participation, participation_coefficient(g, i, labels));
        const auto z = within_module_z(g, i, labels);
        ASSERT_EQ(all[i].within_module_z.has_value(), z.has_value());
        if (z) EXPECT_NEAR(*all[i].within_module_z, *z, 1e-12);
        EXPECT_EQ(threaded[i].within_module_z, all[i].within_module_z);
        EXPECT_EQ(threaded[i].participation, all[i].participation);
    }
}

TEST_F(MetricsGTest, testScalingOnHierarchicalModel) {
    const auto net = gen_deterministic_hierarchical(3);
    ASSERT_EQ(net.size(), 125u);
    const auto fit = ck_scaling(net.projection());
    EXPECT_GE(fit.slope, -1.3);
    EXPECT_LE(fit.slope, -0.7);
    EXPECT_GE(fit.n_bins, 3u);
    EXPECT_EQ(fit.excluded_nodes, 0u);
}

TEST_F(MetricsGTest, testScalingErrors) {
    const auto cycle = graph_of(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
    EXPECT_THROW(ck_scaling(cycle), DataError);
    EXPECT_THROW(ck_scaling(cycle, {Binning::None, 2}), DataError);
}

TEST_F(MetricsGTest, testScalingDependsOnlyOnBinMeans) {
    const auto net = gen_deterministic_hierarchical(3);
    const auto& g = net.projection();
    auto edges = g.edges();
    const std::size_t n = g.node_count();
    const auto original = edges;
    for (const auto& e : original) edges.push_back({e.u + n, e.v + n, e.weight});
    const auto doubled = Graph::from_edges(2 * n, edges);
    for (auto binning : {Binning::Log2, Binning::None}) {
        const auto a = ck_scaling(g, {binning, 2});
        const auto b = ck_scaling(doubled, {binning, 2});
        EXPECT_NEAR(a.slope, b.slope, 1e-12);
        EXPECT_NEAR(a.intercept, b.intercept, 1e-12);
        EXPECT_EQ(a.n_bins, b.n_bins);
    }
}

TEST_F(MetricsGTest, testRandomGraphScalingIsFlat) {
    const auto net = gen_random_graph(2000, 0.01, 0);
    const auto fit = ck_scaling(net.projection());
    EXPECT_LE(std::abs(fit.slope), 0.3);
}

} // namespace
} // namespace ktmap
