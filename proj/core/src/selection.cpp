#include "ktmap/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "ktmap/error.hpp"
#include "ktmap/log.hpp"
#include "ktmap/parallel.hpp"
#include "ktmap/random.hpp"

namespace ktmap {

std::uint64_t citation_rank_value(const CitationNetwork& net, NodeIndex i, RankBy rank_by) {
    if (rank_by == RankBy::ExternalCitations) {
        const auto& ext = net.doc(i).ext_citations;
        return ext ? *ext : net.in_degree(i);
    }
    return net.in_degree(i);
}

std::vector<NodeIndex> top_cited_indices(const CitationNetwork& net, double fraction, RankBy rank_by) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw UsageError("selection fraction must lie in (0, 1], got " + std::to_string(fraction));
    if (net.empty()) throw DataError("cannot select from an empty network");

    std::vector<std::uint64_t> counts(net.size());
    for (NodeIndex i = 0; i < net.size(); ++i) counts[i] = citation_rank_value(net, i, rank_by);

    const auto target = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(net.size()) - 1e-9));
    std::vector<std::uint64_t> ranked = counts;
    std::sort(ranked.begin(), ranked.end(), std::greater<>());
    const std::uint64_t boundary = ranked[std::max<std::size_t>(target, 1) - 1];

    std::vector<NodeIndex> keep;
    for (NodeIndex i = 0; i < net.size(); ++i)
        if (counts[i] >= boundary) keep.push_back(i);
    return keep;
}

CitationNetwork select_top_cited(const CitationNetwork& net, double fraction, RankBy rank_by) {
    const auto keep = top_cited_indices(net, fraction, rank_by);
    return net.induced(keep);
}

double hurwitz_zeta(double s, double q) {
    // Euler-Maclaurin: direct sum up to a shift N, integral tail, Bernoulli corrections.
    static constexpr double kBernoulliOverFactorial[] = {
        1.0 / 12.0,                    // B2/2!
        -1.0 / 720.0,                  // B4/4!
        1.0 / 30240.0,                 // B6/6!
        -1.0 / 1209600.0,              // B8/8!
        1.0 / 47900160.0,              // B10/10!
        -691.0 / 1307674368000.0,      // B12/12!
        1.0 / 74724249600.0,           // B14/14!
    };
    constexpr double kShift = 12.0;
    double sum = 0.0;
    double a = q;
    while (a < kShift) {
        sum += std::pow(a, -s);
        a += 1.0;
    }
    const double a_pow = std::pow(a, -s);
    sum += a * a_pow / (s - 1.0) + 0.5 * a_pow;
    // Term j: B_{2j}/(2j)! * s(s+1)...(s+2j-2) * a^{-s-2j+1}
    double rising = s;
    double power = a_pow / a;
    for (std::size_t j = 0; j < std::size(kBernoulliOverFactorial); ++j) {
        sum += kBernoulliOverFactorial[j] * rising * power;
        rising *= (s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0);
        power /= a * a;
    }
    return sum;
}

namespace {

double sum_log(std::span<const std::uint64_t> tail) {
    double s = 0.0;
    for (auto x : tail) s += std::log(static_cast<double>(x));
    return s;
}

double log_likelihood(double alpha, double n, double log_sum, std::uint64_t xmin) {
    return -alpha * log_sum - n * std::log(hurwitz_zeta(alpha, static_cast<double>(xmin)));
}

double maximise_alpha(double n, double log_sum, std::uint64_t xmin) {
    constexpr double kLower = 1.0 + 1e-9;
    constexpr double kUpper = 30.0;
    const auto result = boost::math::tools::brent_find_minima(
        [&](double alpha) { return -log_likelihood(alpha, n, log_sum, xmin); }, kLower, kUpper,
        std::numeric_limits<double>::digits / 2);
    return result.first;
}

// sorted_tail must be ascending and start at xmin.
double ks_sorted(std::span<const std::uint64_t> sorted_tail, double alpha, std::uint64_t xmin) {
    const double n = static_cast<double>(sorted_tail.size());
    const double norm = hurwitz_zeta(alpha, static_cast<double>(xmin));
    auto model_cdf = [&](std::uint64_t x) {
        if (x < xmin) return 0.0;
        return 1.0 - hurwitz_zeta(alpha, static_cast<double>(x) + 1.0) / norm;
    };
    double d = 0.0;
    double below = 0.0;  // empirical CDF just before the current value
    for (std::size_t i = 0; i < sorted_tail.size();) {
        const std::uint64_t v = sorted_tail[i];
        std::size_t j = i;
        while (j < sorted_tail.size() && sorted_tail[j] == v) ++j;
        const double at = static_cast<double>(j) / n;
        if (v > xmin) d = std::max(d, std::abs(below - model_cdf(v - 1)));
        d = std::max(d, std::abs(at - model_cdf(v)));
        below = at;
        i = j;
    }
    return d;
}

struct Candidate {
    std::uint64_t xmin = 0;
    std::size_t offset = 0;
    double alpha = 0.0;
    double ks = 0.0;
};

std::vector<std::uint64_t> positive_sorted(std::span<const std::uint64_t> values, std::size_t& dropped) {
    std::vector<std::uint64_t> data;
    data.reserve(values.size());
    for (auto v : values)
        if (v > 0) data.push_back(v);
    dropped = values.size() - data.size();
    if (dropped > 0) log_warn("power-law fit: dropped " + std::to_string(dropped) + " zero values");
    std::sort(data.begin(), data.end());
    return data;
}

PowerLawFit fit_sorted(const std::vector<std::uint64_t>& data, unsigned threads) {
    if (data.size() < 2 || data.front() == data.back())
        throw DataError("degenerate distribution: all values identical (or fewer than two values)");

    // Suffix sums of log(x) so each candidate's likelihood costs O(1) per evaluation.
    std::vector<double> suffix_log(data.size() + 1, 0.0);
    for (std::size_t i = data.size(); i-- > 0;)
        suffix_log[i] = suffix_log[i + 1] + std::log(static_cast<double>(data[i]));

    // A usable tail needs two points and two distinct values; otherwise the
    // likelihood is unbounded in alpha.
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (i > 0 && data[i] == data[i - 1]) continue;
        if (data.size() - i < 2 || data[i] == data.back()) break;
        candidates.push_back({data[i], i, 0.0, 0.0});
    }
    if (candidates.empty()) throw DataError("insufficient data: no xmin candidate leaves two tail points");

    parallel_for(candidates.size(), threads, [&](std::size_t c) {
        auto& cand = candidates[c];
        const double n = static_cast<double>(data.size() - cand.offset);
        cand.alpha = maximise_alpha(n, suffix_log[cand.offset], cand.xmin);
        cand.ks = ks_sorted(std::span(data).subspan(cand.offset), cand.alpha, cand.xmin);
    });

    const auto best = std::min_element(candidates.begin(), candidates.end(),
                                       [](const Candidate& a, const Candidate& b) { return a.ks < b.ks; });
    PowerLawFit fit;
    fit.alpha = best->alpha;
    fit.xmin = best->xmin;
    fit.ks_distance = best->ks;
    fit.n_tail = data.size() - best->offset;
    return fit;
}

} // namespace

double power_law_log_likelihood(std::span<const std::uint64_t> tail, double alpha, std::uint64_t xmin) {
    return log_likelihood(alpha, static_cast<double>(tail.size()), sum_log(tail), xmin);
}

double fit_alpha(std::span<const std::uint64_t> tail, std::uint64_t xmin) {
    if (tail.size() < 2) throw DataError("insufficient data: fewer than two tail points");
    return maximise_alpha(static_cast<double>(tail.size()), sum_log(tail), xmin);
}

double power_law_ks_distance(std::span<const std::uint64_t> tail, double alpha, std::uint64_t xmin) {
    std::vector<std::uint64_t> sorted(tail.begin(), tail.end());
    std::sort(sorted.begin(), sorted.end());
    return ks_sorted(sorted, alpha, xmin);
}

PowerLawFit fit_power_law_at(std::span<const std::uint64_t> values, std::uint64_t xmin) {
    if (xmin == 0) throw UsageError("xmin must be >= 1");
    std::size_t dropped = 0;
    auto data = positive_sorted(values, dropped);
    std::vector<std::uint64_t> tail;
    for (auto v : data)
        if (v >= xmin) tail.push_back(v);
    if (tail.size() < 2) throw DataError("insufficient data: fewer than two tail points");
    if (tail.front() == tail.back()) throw DataError("degenerate distribution: tail values identical");
    PowerLawFit fit;
    fit.xmin = xmin;
    fit.alpha = fit_alpha(tail, xmin);
    fit.ks_distance = ks_sorted(tail, fit.alpha, xmin);
    fit.n_tail = tail.size();
    fit.dropped_zeros = dropped;
    return fit;
}

PowerLawFit fit_power_law(std::span<const std::uint64_t> values, const PowerLawOptions& options) {
    std::size_t dropped = 0;
    const auto data = positive_sorted(values, dropped);
    PowerLawFit fit = fit_sorted(data, options.threads);
    fit.dropped_zeros = dropped;
    if (options.bootstrap == 0) return fit;

    // Semiparametric bootstrap: tail draws from the fitted law, body draws
    // resampled from the observed values below xmin.
    const std::size_t n = data.size();
    const std::size_t body = n - fit.n_tail;
    const double tail_share = static_cast<double>(fit.n_tail) / static_cast<double>(n);
    const PowerLawSampler sampler(fit.alpha, fit.xmin);
    std::vector<int> exceeds(options.bootstrap, -1);
    parallel_for(options.bootstrap, options.threads, [&](std::size_t r) {
        Rng rng(mix_seed(options.seed, r));
        std::vector<std::uint64_t> synthetic(n);
        for (auto& x : synthetic)
            x = (body == 0 || rng.uniform() < tail_share) ? sampler(rng) : data[rng.below(body)];
        std::sort(synthetic.begin(), synthetic.end());
        try {
            exceeds[r] = fit_sorted(synthetic, 1).ks_distance >= fit.ks_distance ? 1 : 0;
        } catch (const DataError&) {
            exceeds[r] = -1;
        }
    });
    std::size_t valid = 0, hits = 0;
    for (int e : exceeds)
        if (e >= 0) {
            ++valid;
            hits += static_cast<std::size_t>(e);
        }
    fit.bootstrap_replicates = valid;
    if (valid > 0) fit.p_value = static_cast<double>(hits) / static_cast<double>(valid);
    return fit;
}

PowerLawSampler::PowerLawSampler(double alpha, std::uint64_t xmin)
    : alpha_(alpha), xmin_(xmin), norm_(hurwitz_zeta(alpha, static_cast<double>(xmin))) {
    if (!(alpha > 1.0)) throw UsageError("power-law alpha must exceed 1");
    if (xmin == 0) throw UsageError("power-law xmin must be >= 1");
    constexpr std::size_t kTable = 4096;
    table_.resize(kTable);
    double remaining = 1.0;
    for (std::size_t i = 0; i < kTable; ++i) {
        table_[i] = remaining;
        remaining -= std::pow(static_cast<double>(xmin + i), -alpha) / norm_;
    }
    // Re-anchor the last entry exactly to avoid drift from the running subtraction.
    table_.back() = ccdf(xmin + kTable - 1);
}

double PowerLawSampler::ccdf(std::uint64_t x) const {
    if (x <= xmin_) return 1.0;
    return hurwitz_zeta(alpha_, static_cast<double>(x)) / norm_;
}

std::uint64_t PowerLawSampler::operator()(Rng& rng) const {
    // Smallest x with P(X >= x + 1) < r, r in (0, 1].
    const double r = 1.0 - rng.uniform();
    if (r > table_.back()) {
        // table_ is decreasing; find the last entry >= r.
        auto it = std::partition_point(table_.begin(), table_.end(), [r](double v) { return v >= r; });
        return xmin_ + static_cast<std::uint64_t>(it - table_.begin()) - 1;
    }
    std::uint64_t lo = xmin_ + table_.size() - 1;  // ccdf(lo) >= r
    std::uint64_t hi = lo * 2;
    while (ccdf(hi) >= r) {
        lo = hi;
        hi *= 2;
    }
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        (ccdf(mid) >= r ? lo : hi) = mid;
    }
    return lo;
}

} // namespace ktmap
