#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ktmap/corpus.hpp"

namespace ktmap {

enum class RankBy { InDegree, ExternalCitations };

/// Citation count used for ranking node i.
std::uint64_t citation_rank_value(const CitationNetwork& net, NodeIndex i, RankBy rank_by);

/// Indices of the ceil(fraction * |V|) most cited nodes, ascending. Every node
/// tied with the boundary count is kept, so the result may exceed the target.
std::vector<NodeIndex> top_cited_indices(const CitationNetwork& net, double fraction,
                                         RankBy rank_by = RankBy::InDegree);

/// Induced subnetwork on `top_cited_indices`.
CitationNetwork select_top_cited(const CitationNetwork& net, double fraction,
                                 RankBy rank_by = RankBy::InDegree);

/// Discrete power law P(x) = x^-alpha / zeta(alpha, xmin) for x >= xmin.
struct PowerLawFit {
    double alpha = 0.0;
    std::uint64_t xmin = 1;
    double ks_distance = 0.0;
    std::size_t n_tail = 0;
    /// Semiparametric bootstrap goodness-of-fit, when requested.
    std::optional<double> p_value;
    std::size_t bootstrap_replicates = 0;
    /// Zero observations dropped before fitting.
    std::size_t dropped_zeros = 0;
};

struct PowerLawOptions {
    /// Bootstrap replicates for the p-value; 0 disables it.
    std::size_t bootstrap = 0;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

/// Hurwitz zeta function sum_{k>=0} (q + k)^-s for s > 1, q > 0.
double hurwitz_zeta(double s, double q);

/// Tail log-likelihood of integer data `tail` (all >= xmin) under the discrete power law.
double power_law_log_likelihood(std::span<const std::uint64_t> tail, double alpha, std::uint64_t xmin);

/// Maximum-likelihood alpha for the tail at a fixed xmin.
double fit_alpha(std::span<const std::uint64_t> tail, std::uint64_t xmin);

/// KS distance between the empirical CDF of `tail` and the fitted discrete power law.
double power_law_ks_distance(std::span<const std::uint64_t> tail, double alpha, std::uint64_t xmin);

/// Discrete MLE with xmin chosen by KS minimisation over the observed values.
/// Zeros are dropped with a warning. Throws DataError on a degenerate
/// (single-valued) sample or when no candidate leaves two tail points.
PowerLawFit fit_power_law(std::span<const std::uint64_t> values, const PowerLawOptions& options = {});

/// Fit with xmin fixed by the caller.
PowerLawFit fit_power_law_at(std::span<const std::uint64_t> values, std::uint64_t xmin);

class Rng;

/// Exact inverse-CDF sampler for the discrete power law. The CCDF is tabulated
/// near xmin; deeper tail draws fall back to a bracketed search on the zeta ratio.
class PowerLawSampler {
public:
    PowerLawSampler(double alpha, std::uint64_t xmin);

    std::uint64_t operator()(Rng& rng) const;

    /// P(X >= x).
    double ccdf(std::uint64_t x) const;

private:
    double alpha_;
    std::uint64_t xmin_;
    double norm_;
    std::vector<double> table_;  // table_[i] = P(X >= xmin + i)
};

} // namespace ktmap
