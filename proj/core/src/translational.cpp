#include "ktmap/translational.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ktmap/error.hpp"

namespace ktmap {

std::string_view to_string(TClass c) {
    switch (c) {
    case TClass::Basic: return "basic";
    case TClass::Translational: return "translational";
    case TClass::Clinical: return "clinical";
    case TClass::Unscored: break;
    }
    return "unscored";
}

void Thresholds::validate() const {
    if (!(low >= 0.0 && low < high && high <= 1.0))
        throw UsageError("class thresholds must satisfy 0 <= low < high <= 1 (got low=" + std::to_string(low) +
                         ", high=" + std::to_string(high) + ")");
}

TScore translational_score(std::uint64_t basic, std::uint64_t clinical) {
    const std::uint64_t total = basic + clinical;
    if (total == 0) return std::nullopt;
    return static_cast<double>(clinical) / static_cast<double>(total);
}

TClass classify(TScore score, const Thresholds& thresholds) {
    thresholds.validate();
    if (!score) return TClass::Unscored;
    if (*score < thresholds.low) return TClass::Basic;
    if (*score > thresholds.high) return TClass::Clinical;
    return TClass::Translational;
}

std::vector<TranslationalProfile> score_documents(const CitationNetwork& net, const Lexicon* lexicon,
                                                  const Thresholds& thresholds) {
    thresholds.validate();
    std::vector<TranslationalProfile> out;
    out.reserve(net.size());
    for (const auto& doc : net.docs()) {
        const auto counts = document_terms(doc, lexicon);
        const auto score = translational_score(counts.basic, counts.clinical);
        out.push_back({score, classify(score, thresholds)});
    }
    return out;
}

std::vector<TScore> scores_of(std::span<const TranslationalProfile> profiles) {
    std::vector<TScore> out;
    out.reserve(profiles.size());
    for (const auto& p : profiles) out.push_back(p.score);
    return out;
}

std::optional<double> homophily_assortativity(const CitationNetwork& net, std::span<const TScore> scores) {
    if (scores.size() != net.size()) throw UsageError("score vector does not match the network size");
    std::vector<std::pair<double, double>> pairs;
    for (const auto& c : net.citations())
        if (scores[c.citing] && scores[c.cited]) pairs.emplace_back(*scores[c.citing], *scores[c.cited]);
    if (pairs.size() < 2) throw DataError("assortativity needs at least two citations between scored documents");

    const double n = static_cast<double>(pairs.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& [x, y] : pairs) {
        mean_x += x;
        mean_y += y;
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const auto& [x, y] : pairs) {
        sxx += (x - mean_x) * (x - mean_x);
        syy += (y - mean_y) * (y - mean_y);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<FrontSummary> front_score_summary(std::span<const std::size_t> labels, std::span<const TScore> scores,
                                              const Thresholds& thresholds) {
    if (labels.size() != scores.size()) throw UsageError("partition and scores cover different node sets");
    thresholds.validate();
    std::size_t fronts = 0;
    for (auto l : labels) fronts = std::max(fronts, l + 1);

    std::vector<FrontSummary> out(fronts);
    std::vector<double> sums(fronts, 0.0);
    for (std::size_t f = 0; f < fronts; ++f) out[f].front = f;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto& s = out[labels[i]];
        ++s.size;
        ++s.class_counts[static_cast<std::size_t>(classify(scores[i], thresholds))];
        if (scores[i]) {
            ++s.scored;
            sums[labels[i]] += *scores[i];
        }
    }
    for (std::size_t f = 0; f < fronts; ++f) {
        auto& s = out[f];
        if (s.scored > 0) s.mean_t = sums[f] / static_cast<double>(s.scored);
        s.all_unscored = s.size > 0 && s.scored == 0;
        s.unscored_share = s.size == 0 ? 0.0 : static_cast<double>(s.size - s.scored) / static_cast<double>(s.size);
        s.cls = classify(s.mean_t, thresholds);
    }
    return out;
}

} // namespace ktmap
