#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include <json.hpp>

#include "ktmap/error.hpp"
#include "ktmap/random.hpp"
#include "ktmap/synth.hpp"
#include "oracles.hpp"

namespace ktmap {
namespace {

class SynthGTest : public testing::Test {};

TEST_F(SynthGTest, testPlantedIsPureFunctionOfSeed) {
    PlantedConfig config;
    config.n_hubs = 3;
    const auto a = gen_planted_kt_network(config, 11);
    const auto b = gen_planted_kt_network(config, 11);
    const auto c = gen_planted_kt_network(config, 12);
    ASSERT_EQ(a.network.size(), 203u);
    EXPECT_TRUE(std::equal(a.network.citations().begin(), a.network.citations().end(),
                           b.network.citations().begin(), b.network.citations().end()));
    EXPECT_FALSE(std::equal(a.network.citations().begin(), a.network.citations().end(),
                            c.network.citations().begin(), c.network.citations().end()));
    EXPECT_EQ(ground_truth_json(a.network, a.truth), ground_truth_json(b.network, b.truth));
}

TEST_F(SynthGTest, testCitationsPointBackInTime) {
    PlantedConfig config;
    config.n_hubs = 2;
    const auto corpus = gen_planted_kt_network(config, 3);
    for (const auto& c : corpus.network.citations())
        EXPECT_GE(*corpus.network.doc(c.citing).year, *corpus.network.doc(c.cited).year);
}

TEST_F(SynthGTest, testPlantedBlockStructure) {
    PlantedConfig config;
    config.branching = {2, 3};
    config.leaf_size = 10;
    config.p_within = {0.2, 0.8};
    config.p_between = 0.01;
    const auto corpus = gen_planted_kt_network(config, 5);
    const auto& truth = corpus.truth;
    ASSERT_EQ(corpus.network.size(), 60u);
    const auto top = truth.labels_at(1);
    const auto leaf = truth.leaf_labels();
    for (NodeIndex i = 0; i < 60; ++i) {
        EXPECT_EQ(leaf[i], i / 10);
        EXPECT_EQ(top[i], i / 30);
        EXPECT_DOUBLE_EQ(truth.target_t[i], static_cast<double>(i / 10) / 5.0);
    }
    EXPECT_THROW(truth.labels_at(0), UsageError);
    EXPECT_THROW(truth.labels_at(3), UsageError);

    // Leaf blocks are far denser than the space between top-level blocks.
    std::size_t within = 0, between = 0;
    for (const auto& c : corpus.network.citations()) {
        if (leaf[c.citing] == leaf[c.cited]) ++within;
        if (top[c.citing] != top[c.cited]) ++between;
    }
    EXPECT_GT(within, 200u);
    EXPECT_LT(between, 40u);
}

TEST_F(SynthGTest, testHubsBridgeTwoBlocks) {
    PlantedConfig config;
    config.n_hubs = 4;
    config.hub_links = 10;
    const auto corpus = gen_planted_kt_network(config, 9);
    const auto leaf = corpus.truth.leaf_labels();
    ASSERT_EQ(corpus.truth.hubs.size(), 4u);
    const auto& g = corpus.network.projection();
    for (auto h : corpus.truth.hubs) {
        std::map<std::size_t, std::size_t> per_block;
        for (const auto& [v, w] : g.neighbors(h)) per_block[leaf[v]]++;
        ASSERT_EQ(per_block.size(), 2u);
        for (const auto& [block, count] : per_block) EXPECT_EQ(count, 10u);
    }
}

TEST_F(SynthGTest, testConfigValidation) {
    PlantedConfig config;
    config.p_within = {0.1, 0.2};
    EXPECT_THROW(config.validate(), UsageError);
    config = {};
    config.homophily = 1.5;
    EXPECT_THROW(config.validate(), UsageError);
    config = {};
    config.branching = {};
    EXPECT_THROW(config.validate(), UsageError);
    config = {};
    config.hub_links = 51;
    config.n_hubs = 1;
    EXPECT_THROW(config.validate(), UsageError);
    config = {};
    config.leaf_size = 0;
    EXPECT_THROW(gen_planted_kt_network(config, 1), UsageError);
}

TEST_F(SynthGTest, testHierarchicalModelSizes) {
    std::size_t expected = 5;
    std::size_t edges = 10;
    for (std::size_t it = 1; it <= 4; ++it) {
        const auto net = gen_deterministic_hierarchical(it);
        EXPECT_EQ(net.size(), expected);
        EXPECT_EQ(net.citations().size(), edges);
        // Four replicas, each with 4^it peripherals wired to the hub.
        expected *= 5;
        edges = 5 * edges + 4 * static_cast<std::size_t>(std::pow(4, it));
    }
    EXPECT_THROW(gen_deterministic_hierarchical(0), UsageError);
    EXPECT_THROW(gen_deterministic_hierarchical(7), UsageError);
}

TEST_F(SynthGTest, testRandomGraphDensity) {
    const auto net = gen_random_graph(300, 0.05, 2);
    const double pairs = 300.0 * 299.0 / 2.0;
    EXPECT_NEAR(static_cast<double>(net.citations().size()) / pairs, 0.05, 0.005);
    EXPECT_THROW(gen_random_graph(1, 0.5, 1), UsageError);
    EXPECT_THROW(gen_random_graph(10, -0.1, 1), UsageError);
}

TEST_F(SynthGTest, testNmiProperties) {
    const std::vector<std::size_t> a{0, 0, 1, 1, 2, 2};
    const std::vector<std::size_t> relabelled{5, 5, 3, 3, 9, 9};
    EXPECT_DOUBLE_EQ(normalized_mutual_information(a, relabelled), 1.0);
    const std::vector<std::size_t> trivial(6, 0);
    EXPECT_DOUBLE_EQ(normalized_mutual_information(trivial, trivial), 1.0);
    EXPECT_DOUBLE_EQ(normalized_mutual_information(a, trivial), 0.0);
    const std::vector<std::size_t> short_labels{0};
    EXPECT_THROW(normalized_mutual_information(a, short_labels), UsageError);

    Rng rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::size_t> x(40), y(40);
        for (auto& v : x) v = rng.below(4);
        for (auto& v : y) v = rng.below(3);
        const double nmi = normalized_mutual_information(x, y);
        EXPECT_NEAR(nmi, oracle::nmi(x, y), 1e-12);
        EXPECT_NEAR(nmi, normalized_mutual_information(y, x), 1e-12);
    }
}

TEST_F(SynthGTest, testGroundTruthJson) {
    PlantedConfig config;
    config.branching = {2, 2};
    config.leaf_size = 3;
    config.p_within = {0.5, 0.9};
    config.n_hubs = 1;
    config.hub_links = 2;
    const auto corpus = gen_planted_kt_network(config, 21);
    const auto j = nlohmann::json::parse(ground_truth_json(corpus.network, corpus.truth));
    EXPECT_EQ(j["seed"], 21);
    ASSERT_EQ(j["nodes"].size(), 13u);
    EXPECT_EQ(j["nodes"][0]["front_path"], "1.1");
    EXPECT_EQ(j["nodes"][11]["front_path"], "2.4");
    EXPECT_EQ(j["hubs"].size(), 1u);
    EXPECT_EQ(j["hubs"][0], corpus.network.doc(12).id);
    EXPECT_EQ(j["config"]["branching"], (std::vector<int>{2, 2}));
}

} // namespace
} // namespace ktmap
