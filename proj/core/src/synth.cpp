#include "ktmap/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include <json.hpp>

#include "ktmap/error.hpp"
#include "ktmap/random.hpp"

namespace ktmap {
namespace {

std::string make_id(char prefix, std::size_t index, std::size_t total) {
    std::string digits = std::to_string(index);
    const std::size_t width = std::max<std::size_t>(4, std::to_string(total == 0 ? 0 : total - 1).size());
    return std::string(1, prefix) + std::string(width - std::min(width, digits.size()), '0') + digits;
}

bool valid_probability(double p) { return p >= 0.0 && p <= 1.0; }

} // namespace

std::size_t PlantedConfig::leaf_count() const {
    std::size_t leaves = 1;
    for (auto b : branching) leaves *= b;
    return leaves;
}

void PlantedConfig::validate() const {
    if (branching.empty()) throw UsageError("planted config needs at least one level");
    for (auto b : branching)
        if (b == 0) throw UsageError("planted branching factors must be positive");
    if (leaf_size == 0) throw UsageError("planted leaf_size must be positive");
    if (p_within.size() != branching.size())
        throw UsageError("p_within needs one probability per level (" + std::to_string(branching.size()) + ")");
    for (double p : p_within)
        if (!valid_probability(p)) throw UsageError("p_within probabilities must lie in [0, 1]");
    if (!valid_probability(p_between)) throw UsageError("p_between must lie in [0, 1]");
    if (!valid_probability(homophily)) throw UsageError("homophily must lie in [0, 1]");
    if (!(term_noise >= 0.0 && term_noise <= 1.0)) throw UsageError("term_noise must lie in [0, 1]");
    if (n_hubs > 0 && leaf_count() < 2) throw UsageError("planted hubs need at least two leaf blocks");
    if (n_hubs > 0 && hub_links > leaf_size) throw UsageError("hub_links cannot exceed leaf_size");
}

std::vector<std::size_t> GroundTruth::labels_at(std::size_t depth) const {
    if (depth == 0 || depth > config.branching.size()) throw UsageError("depth out of range");
    std::vector<std::size_t> out;
    out.reserve(front_path.size());
    for (const auto& path : front_path) out.push_back(path[depth - 1]);
    return out;
}

SyntheticCorpus gen_planted_kt_network(const PlantedConfig& config, std::uint64_t seed) {
    config.validate();
    const std::size_t depth = config.branching.size();
    const std::size_t leaves = config.leaf_count();
    const std::size_t block_nodes = leaves * config.leaf_size;
    const std::size_t total = block_nodes + config.n_hubs;
    Rng rng(seed);

    // Subtree sizes in leaves at each depth: leaf l belongs to block l / span[d] at depth d+1.
    std::vector<std::size_t> span(depth, 1);
    for (std::size_t d = depth; d-- > 0;) span[d] = d + 1 < depth ? span[d + 1] * config.branching[d + 1] : 1;

    std::vector<double> leaf_t(leaves);
    for (std::size_t l = 0; l < leaves; ++l)
        leaf_t[l] = leaves == 1 ? 0.5 : static_cast<double>(l) / static_cast<double>(leaves - 1);

    SyntheticCorpus out;
    auto& truth = out.truth;
    truth.config = config;
    truth.seed = seed;
    truth.front_path.resize(total);
    truth.target_t.resize(total);
    std::vector<std::size_t> leaf_of(total);
    for (NodeIndex i = 0; i < block_nodes; ++i) {
        const std::size_t leaf = i / config.leaf_size;
        leaf_of[i] = leaf;
        truth.target_t[i] = leaf_t[leaf];
        for (std::size_t d = 0; d < depth; ++d) truth.front_path[i].push_back(leaf / span[d]);
    }

    // Publication order is a random permutation independent of the blocks, so
    // citation direction carries no information about T.
    std::vector<std::size_t> age(total);
    std::iota(age.begin(), age.end(), std::size_t{0});
    for (std::size_t k = total; k > 1; --k) std::swap(age[k - 1], age[rng.below(k)]);

    std::vector<Citation> citations;
    auto link = [&](NodeIndex a, NodeIndex b) {
        if (age[a] < age[b]) std::swap(a, b);
        citations.push_back({a, b});
    };
    for (NodeIndex u = 0; u < block_nodes; ++u)
        for (NodeIndex v = u + 1; v < block_nodes; ++v) {
            std::size_t common = 0;
            while (common < depth && truth.front_path[u][common] == truth.front_path[v][common]) ++common;
            const double base = common == 0 ? config.p_between : config.p_within[common - 1];
            const double p = base * (1.0 - config.homophily * std::abs(truth.target_t[u] - truth.target_t[v]));
            if (rng.bernoulli(p)) link(u, v);
        }

    // Hub h bridges leaf h mod L and the leaf half-way round, which carries a different planted T.
    for (std::size_t h = 0; h < config.n_hubs; ++h) {
        const NodeIndex hub = block_nodes + h;
        const std::size_t first = h % leaves;
        const std::size_t second = (first + std::max<std::size_t>(1, leaves / 2)) % leaves;
        truth.hubs.push_back(hub);
        truth.front_path[hub] = truth.front_path[first * config.leaf_size];
        truth.target_t[hub] = 0.5 * (leaf_t[first] + leaf_t[second]);
        leaf_of[hub] = first;
        for (std::size_t leaf : {first, second}) {
            std::vector<NodeIndex> pool(config.leaf_size);
            std::iota(pool.begin(), pool.end(), leaf * config.leaf_size);
            for (std::size_t k = 0; k < config.hub_links; ++k) {
                const std::size_t pick = k + rng.below(pool.size() - k);
                std::swap(pool[k], pool[pick]);
                link(hub, pool[k]);
            }
        }
    }

    std::vector<Document> docs(total);
    for (NodeIndex i = 0; i < total; ++i) {
        auto& doc = docs[i];
        doc.id = make_id('d', i, total);
        doc.year = 1970 + static_cast<int>((age[i] * 50) / std::max<std::size_t>(total, 1));
        const double jitter = config.term_noise * (2.0 * rng.uniform() - 1.0);
        const double t = std::clamp(truth.target_t[i] + jitter, 0.0, 1.0);
        TermCounts counts;
        for (std::size_t k = 0; k < config.terms_per_doc; ++k) (rng.bernoulli(t) ? counts.clinical : counts.basic)++;
        doc.terms = counts;
    }
    out.network = CitationNetwork(std::move(docs), std::move(citations));
    return out;
}

CitationNetwork gen_deterministic_hierarchical(std::size_t iterations, std::size_t max_iterations) {
    if (iterations == 0) throw UsageError("hierarchical model needs at least one iteration");
    if (iterations > max_iterations)
        throw UsageError("hierarchical model capped at " + std::to_string(max_iterations) + " iterations");

    // Level 1: a 5-clique with hub 0 and peripheral nodes 1..4.
    std::vector<std::pair<NodeIndex, NodeIndex>> edges;
    for (NodeIndex a = 0; a < 5; ++a)
        for (NodeIndex b = a + 1; b < 5; ++b) edges.emplace_back(a, b);
    std::vector<NodeIndex> peripheral{1, 2, 3, 4};
    std::size_t size = 5;

    for (std::size_t it = 1; it < iterations; ++it) {
        std::vector<std::pair<NodeIndex, NodeIndex>> next = edges;
        std::vector<NodeIndex> next_peripheral;
        for (std::size_t copy = 1; copy < 5; ++copy) {
            const std::size_t offset = copy * size;
            for (const auto& [a, b] : edges) next.emplace_back(a + offset, b + offset);
            for (NodeIndex p : peripheral) {
                next.emplace_back(0, p + offset);
                next_peripheral.push_back(p + offset);
            }
        }
        edges = std::move(next);
        peripheral = std::move(next_peripheral);
        size *= 5;
    }

    std::vector<Document> docs(size);
    for (NodeIndex i = 0; i < size; ++i) docs[i].id = make_id('h', i, size);
    std::vector<Citation> citations;
    citations.reserve(edges.size());
    for (const auto& [a, b] : edges) citations.push_back({std::max(a, b), std::min(a, b)});
    return CitationNetwork(std::move(docs), std::move(citations));
}

CitationNetwork gen_random_graph(std::size_t n, double p, std::uint64_t seed) {
    if (n < 2) throw UsageError("random graph needs n >= 2");
    if (!valid_probability(p)) throw UsageError("random graph probability must lie in [0, 1]");
    Rng rng(seed);
    std::vector<Citation> citations;
    for (NodeIndex u = 0; u < n; ++u)
        for (NodeIndex v = u + 1; v < n; ++v)
            if (rng.bernoulli(p)) citations.push_back({v, u});
    std::vector<Document> docs(n);
    for (NodeIndex i = 0; i < n; ++i) docs[i].id = make_id('r', i, n);
    return CitationNetwork(std::move(docs), std::move(citations));
}

double normalized_mutual_information(std::span<const std::size_t> a, std::span<const std::size_t> b) {
    if (a.size() != b.size()) throw UsageError("NMI needs two labelings of the same node set");
    if (a.empty()) return 1.0;
    const double n = static_cast<double>(a.size());
    std::map<std::size_t, double> ca, cb;
    std::map<std::pair<std::size_t, std::size_t>, double> joint;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ca[a[i]] += 1.0;
        cb[b[i]] += 1.0;
        joint[{a[i], b[i]}] += 1.0;
    }
    auto entropy = [n](const std::map<std::size_t, double>& counts) {
        double h = 0.0;
        for (const auto& [label, c] : counts) h -= (c / n) * std::log(c / n);
        return h;
    };
    const double ha = entropy(ca), hb = entropy(cb);
    if (ha + hb <= 0.0) return 1.0;
    double mi = 0.0;
    for (const auto& [pair, c] : joint) mi += (c / n) * std::log((c * n) / (ca[pair.first] * cb[pair.second]));
    return std::clamp(2.0 * mi / (ha + hb), 0.0, 1.0);
}

std::string ground_truth_json(const CitationNetwork& net, const GroundTruth& truth) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["seed"] = truth.seed;
    const auto& c = truth.config;
    j["config"] = {{"branching", c.branching},   {"leaf_size", c.leaf_size},     {"p_within", c.p_within},
                   {"p_between", c.p_between},   {"homophily", c.homophily},     {"n_hubs", c.n_hubs},
                   {"hub_links", c.hub_links},   {"terms_per_doc", c.terms_per_doc}, {"term_noise", c.term_noise}};
    ordered_json nodes = ordered_json::array();
    for (NodeIndex i = 0; i < truth.front_path.size(); ++i) {
        std::string path;
        for (auto label : truth.front_path[i]) path += (path.empty() ? "" : ".") + std::to_string(label + 1);
        nodes.push_back({{"id", net.doc(i).id}, {"front_path", path}, {"target_t", truth.target_t[i]}});
    }
    j["nodes"] = std::move(nodes);
    ordered_json hubs = ordered_json::array();
    for (auto h : truth.hubs) hubs.push_back(net.doc(h).id);
    j["hubs"] = std::move(hubs);
    return j.dump(2) + "\n";
}

} // namespace ktmap
