#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ktmap/corpus.hpp"

namespace ktmap {

/// Position on the basic (0) to clinical (1) axis; empty when a document has no matched terms.
using TScore = std::optional<double>;

enum class TClass { Basic, Translational, Clinical, Unscored };

std::string_view to_string(TClass c);

struct Thresholds {
    double low = 1.0 / 3.0;
    double high = 2.0 / 3.0;

    /// Throws UsageError unless 0 <= low < high <= 1.
    void validate() const;
};

/// clinical / (basic + clinical), or empty when both counts are zero.
TScore translational_score(std::uint64_t basic, std::uint64_t clinical);

/// T < low is Basic, low <= T <= high is Translational, T > high is Clinical.
TClass classify(TScore score, const Thresholds& thresholds = {});

struct TranslationalProfile {
    TScore score;
    TClass cls = TClass::Unscored;
};

/// Scores every document; raw term lists are counted against `lexicon` when given.
std::vector<TranslationalProfile> score_documents(const CitationNetwork& net, const Lexicon* lexicon,
                                                  const Thresholds& thresholds = {});

std::vector<TScore> scores_of(std::span<const TranslationalProfile> profiles);

/// Pearson correlation of (T_citing, T_cited) over citations with both ends
/// scored. Empty when either marginal has zero variance; DataError when fewer
/// than two citations are scorable.
std::optional<double> homophily_assortativity(const CitationNetwork& net, std::span<const TScore> scores);

struct FrontSummary {
    std::size_t front = 0;
    std::size_t size = 0;
    std::size_t scored = 0;
    std::optional<double> mean_t;
    double unscored_share = 0.0;
    /// Indexed by TClass.
    std::array<std::size_t, 4> class_counts{};
    bool all_unscored = false;
    /// Class of the front's mean T (Unscored when the mean is absent).
    TClass cls = TClass::Unscored;
};

/// Aggregates per front label; labels must be dense in [0, max label].
std::vector<FrontSummary> front_score_summary(std::span<const std::size_t> labels,
                                              std::span<const TScore> scores, const Thresholds& thresholds = {});

} // namespace ktmap
