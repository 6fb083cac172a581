#include <gtest/gtest.h>

#include "ktmap/error.hpp"
#include "ktmap/random.hpp"
#include "ktmap/translational.hpp"
#include "oracles.hpp"

namespace ktmap {
namespace {

class TranslationalGTest : public testing::Test {};

CitationNetwork blocks(std::size_t per_block, bool within, bool across) {
    std::vector<Document> docs(2 * per_block);
    for (NodeIndex i = 0; i < docs.size(); ++i) {
        docs[i].id = "t" + std::to_string(i);
        docs[i].terms = i < per_block ? TermCounts{4, 0} : TermCounts{0, 4};
    }
    std::vector<Citation> citations;
    for (NodeIndex u = 0; u < docs.size(); ++u)
        for (NodeIndex v = 0; v < docs.size(); ++v) {
            if (u == v) continue;
            const bool same = (u < per_block) == (v < per_block);
            if ((same && within) || (!same && across)) citations.push_back({u, v});
        }
    return CitationNetwork(docs, citations);
}

TEST_F(TranslationalGTest, testScoreExamples) {
    EXPECT_EQ(translational_score(5, 0), 0.0);
    EXPECT_EQ(translational_score(0, 5), 1.0);
    EXPECT_EQ(translational_score(3, 1), 0.25);
    EXPECT_FALSE(translational_score(0, 0).has_value());
}

TEST_F(TranslationalGTest, testScoreScaleInvarianceAndSymmetry) {
    for (std::uint64_t a = 0; a < 12; ++a)
        for (std::uint64_t b = 0; b < 12; ++b) {
            if (a + b == 0) continue;
            for (std::uint64_t m : {2u, 3u, 17u}) EXPECT_DOUBLE_EQ(*translational_score(a * m, b * m), *translational_score(a, b));
            EXPECT_DOUBLE_EQ(*translational_score(a, b), 1.0 - *translational_score(b, a));
        }
}

TEST_F(TranslationalGTest, testClassifyAtBoundaries) {
    const Thresholds t;
    EXPECT_EQ(classify(0.0, t), TClass::Basic);
    EXPECT_EQ(classify(0.5, t), TClass::Translational);
    EXPECT_EQ(classify(1.0, t), TClass::Clinical);
    EXPECT_EQ(classify(t.low, t), TClass::Translational);
    EXPECT_EQ(classify(t.high, t), TClass::Translational);
    EXPECT_EQ(classify(std::nextafter(t.low, 0.0), t), TClass::Basic);
    EXPECT_EQ(classify(std::nextafter(t.high, 1.0), t), TClass::Clinical);
    EXPECT_EQ(classify(std::nullopt, t), TClass::Unscored);
    const Thresholds custom{0.2, 0.4};
    EXPECT_EQ(classify(0.2, custom), TClass::Translational);
    EXPECT_EQ(classify(0.4, custom), TClass::Translational);
}

TEST_F(TranslationalGTest, testInvalidThresholds) {
    EXPECT_THROW((Thresholds{0.5, 0.5}.validate()), UsageError);
    EXPECT_THROW((Thresholds{0.7, 0.2}.validate()), UsageError);
    EXPECT_THROW((Thresholds{-0.1, 0.2}.validate()), UsageError);
    EXPECT_THROW((Thresholds{0.1, 1.2}.validate()), UsageError);
    EXPECT_THROW(classify(0.5, Thresholds{0.6, 0.3}), UsageError);
    EXPECT_NO_THROW((Thresholds{0.0, 1.0}.validate()));
}

TEST_F(TranslationalGTest, testScoreDocumentsUsesLexiconForRawTerms) {
    std::vector<Document> docs(3);
    docs[0].id = "a";
    docs[0].raw_terms = {"gene", "gene", "trial"};
    docs[1].id = "b";
    docs[1].terms = TermCounts{1, 1};
    docs[2].id = "c";
    const CitationNetwork net(docs, {});
    const Lexicon lexicon({"gene"}, {"trial"});
    const auto profiles = score_documents(net, &lexicon);
    EXPECT_NEAR(*profiles[0].score, 1.0 / 3.0, 1e-15);
    EXPECT_EQ(profiles[0].cls, TClass::Translational);
    EXPECT_EQ(profiles[1].score, 0.5);
    EXPECT_FALSE(profiles[2].score.has_value());
    EXPECT_EQ(profiles[2].cls, TClass::Unscored);
}

TEST_F(TranslationalGTest, testAssortativityExtremes) {
    const auto within = blocks(5, true, false);
    EXPECT_NEAR(*homophily_assortativity(within, scores_of(score_documents(within, nullptr))), 1.0, 1e-12);
    const auto across = blocks(5, false, true);
    EXPECT_NEAR(*homophily_assortativity(across, scores_of(score_documents(across, nullptr))), -1.0, 1e-12);
}

TEST_F(TranslationalGTest, testAssortativityUndefinedAndErrors) {
    std::vector<Document> docs(3);
    for (NodeIndex i = 0; i < 3; ++i) {
        docs[i].id = "u" + std::to_string(i);
        docs[i].terms = TermCounts{1, 1};
    }
    const CitationNetwork flat(docs, {{1, 0}, {2, 0}, {2, 1}});
    EXPECT_FALSE(homophily_assortativity(flat, scores_of(score_documents(flat, nullptr))).has_value());

    const CitationNetwork one(docs, {{1, 0}});
    EXPECT_THROW(homophily_assortativity(one, scores_of(score_documents(one, nullptr))), DataError);

    std::vector<TScore> wrong(2);
    EXPECT_THROW(homophily_assortativity(flat, wrong), UsageError);
}

TEST_F(TranslationalGTest, testAssortativityMatchesPearsonAndIsAffineInvariant) {
    Rng rng(17);
    std::vector<Document> docs(40);
    std::vector<TScore> scores(40);
    for (NodeIndex i = 0; i < docs.size(); ++i) {
        docs[i].id = "p" + std::to_string(i);
        if (i % 7 != 3) scores[i] = rng.uniform();
    }
    std::vector<Citation> citations;
    for (NodeIndex u = 0; u < docs.size(); ++u)
        for (NodeIndex v = 0; v < u; ++v)
            if (rng.bernoulli(0.2)) citations.push_back({u, v});
    const CitationNetwork net(docs, citations);

    std::vector<double> x, y;
    for (const auto& c : net.citations())
        if (scores[c.citing] && scores[c.cited]) {
            x.push_back(*scores[c.citing]);
            y.push_back(*scores[c.cited]);
        }
    const double r = *homophily_assortativity(net, scores);
    EXPECT_NEAR(r, oracle::pearson(x, y), 1e-12);

    auto shifted = scores;
    for (auto& s : shifted)
        if (s) *s = 3.5 * *s - 2.0;
    EXPECT_NEAR(*homophily_assortativity(net, shifted), r, 1e-12);
}

TEST_F(TranslationalGTest, testFrontSummary) {
    const std::vector<std::size_t> labels{0, 0, 0, 1, 1, 2};
    const std::vector<TScore> scores{0.0, 0.0, 0.3, 0.9, 1.0, std::nullopt};
    const auto summary = front_score_summary(labels, scores);
    ASSERT_EQ(summary.size(), 3u);
    EXPECT_NEAR(*summary[0].mean_t, 0.1, 1e-15);
    EXPECT_EQ(summary[0].cls, TClass::Basic);
    EXPECT_EQ(summary[0].size, 3u);
    EXPECT_LT(*summary[0].mean_t, *summary[1].mean_t);
    EXPECT_EQ(summary[1].cls, TClass::Clinical);
    EXPECT_TRUE(summary[2].all_unscored);
    EXPECT_FALSE(summary[2].mean_t.has_value());
    EXPECT_EQ(summary[2].unscored_share, 1.0);
    EXPECT_EQ(summary[0].class_counts[0], 3u);  // 0.3 is still below the low threshold
    EXPECT_EQ(summary[1].class_counts[2], 2u);
    EXPECT_EQ(summary[0].class_counts[0] + summary[0].class_counts[1] + summary[0].class_counts[2] +
                  summary[0].class_counts[3],
              3u);
}

} // namespace
} // namespace ktmap
