#include "ktmap/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <utility>

#include <json.hpp>

#include "ktmap/error.hpp"
#include "ktmap/log.hpp"

namespace ktmap {
namespace {

using json = nlohmann::json;

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
    });
    return s;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::set<std::string> read_terms(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open lexicon file " + path.string());
    std::set<std::string> terms;
    std::string line;
    while (std::getline(in, line)) {
        auto term = trim(line);
        if (term.empty() || term.front() == '#') continue;
        terms.insert(lowercase(std::string(term)));
    }
    return terms;
}

std::uint64_t read_count(const json& record, const char* key, std::size_t line_no) {
    const auto& v = record.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
        throw DataError("nodes line " + std::to_string(line_no) + ": '" + key +
                        "' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

Document parse_document(const std::string& line, std::size_t line_no) {
    const std::string where = "nodes line " + std::to_string(line_no) + ": ";
    json record;
    try {
        record = json::parse(line);
    } catch (const json::parse_error& e) {
        throw DataError(where + "malformed record (" + e.what() + ")");
    }
    if (!record.is_object()) throw DataError(where + "record is not an object");

    Document doc;
    auto id = record.find("id");
    if (id == record.end() || !id->is_string() || id->get<std::string>().empty())
        throw DataError(where + "missing or empty 'id'");
    doc.id = id->get<std::string>();

    if (auto year = record.find("year"); year != record.end() && !year->is_null()) {
        if (!year->is_number_integer()) throw DataError(where + "'year' must be an integer");
        doc.year = year->get<int>();
    }
    if (auto kind = record.find("kind"); kind != record.end() && !kind->is_null()) {
        const auto value = kind->is_string() ? kind->get<std::string>() : std::string();
        if (value == "paper")
            doc.kind = DocKind::Paper;
        else if (value == "patent")
            doc.kind = DocKind::Patent;
        else
            throw DataError(where + "'kind' must be \"paper\" or \"patent\"");
    }
    const bool has_basic = record.contains("basic_terms");
    const bool has_clinical = record.contains("clinical_terms");
    if (has_basic || has_clinical) {
        TermCounts counts;
        if (has_basic) counts.basic = read_count(record, "basic_terms", line_no);
        if (has_clinical) counts.clinical = read_count(record, "clinical_terms", line_no);
        doc.terms = counts;
    }
    if (auto terms = record.find("terms"); terms != record.end() && !terms->is_null()) {
        if (!terms->is_array()) throw DataError(where + "'terms' must be an array of strings");
        for (const auto& t : *terms) {
            if (!t.is_string()) throw DataError(where + "'terms' must be an array of strings");
            doc.raw_terms.push_back(lowercase(t.get<std::string>()));
        }
    }
    if (auto ext = record.find("ext_citations"); ext != record.end() && !ext->is_null())
        doc.ext_citations = read_count(record, "ext_citations", line_no);
    return doc;
}

} // namespace

std::string_view to_string(DocKind kind) { return kind == DocKind::Patent ? "patent" : "paper"; }

Lexicon::Lexicon(std::set<std::string> basic, std::set<std::string> clinical) {
    for (const auto& t : basic) basic_.insert(lowercase(t));
    for (const auto& t : clinical) clinical_.insert(lowercase(t));
    for (const auto& t : basic_)
        if (clinical_.contains(t))
            throw DataError("lexicon term '" + t + "' appears in both basic and clinical lists");
}

Lexicon Lexicon::load(const std::filesystem::path& basic, const std::filesystem::path& clinical) {
    return Lexicon(read_terms(basic), read_terms(clinical));
}

TermCounts count_terms(std::span<const std::string> raw_terms, const Lexicon& lexicon) {
    TermCounts counts;
    for (const auto& term : raw_terms) {
        if (lexicon.basic().contains(term))
            ++counts.basic;
        else if (lexicon.clinical().contains(term))
            ++counts.clinical;
    }
    return counts;
}

TermCounts document_terms(const Document& doc, const Lexicon* lexicon) {
    if (doc.terms) return *doc.terms;
    if (lexicon == nullptr) return {};
    return count_terms(doc.raw_terms, *lexicon);
}

CitationNetwork::CitationNetwork(std::vector<Document> docs, std::vector<Citation> citations)
    : docs_(std::move(docs)) {
    index_.reserve(docs_.size());
    for (NodeIndex i = 0; i < docs_.size(); ++i) {
        if (docs_[i].id.empty()) throw DataError("document " + std::to_string(i) + " has an empty id");
        if (!index_.emplace(docs_[i].id, i).second)
            throw DataError("duplicate document id '" + docs_[i].id + "'");
    }
    for (const auto& c : citations) {
        if (c.citing >= docs_.size() || c.cited >= docs_.size())
            throw DataError("citation endpoint out of range");
        if (c.citing == c.cited) throw DataError("self-citation on '" + docs_[c.citing].id + "'");
    }
    std::sort(citations.begin(), citations.end());
    citations.erase(std::unique(citations.begin(), citations.end()), citations.end());
    citations_ = std::move(citations);

    cites_.resize(docs_.size());
    cited_by_.resize(docs_.size());
    std::vector<WeightedEdge> undirected;
    undirected.reserve(citations_.size());
    for (const auto& c : citations_) {
        cites_[c.citing].push_back(c.cited);
        cited_by_[c.cited].push_back(c.citing);
        // Reciprocal citations collapse to one undirected edge; keep only the
        // first orientation so weights stay at 1.
        const bool reciprocal = std::binary_search(citations_.begin(), citations_.end(),
                                                   Citation{c.cited, c.citing});
        if (!reciprocal || c.citing < c.cited) undirected.push_back({c.citing, c.cited, 1.0});
    }
    for (auto& list : cited_by_) std::sort(list.begin(), list.end());
    projection_ = Graph::from_edges(docs_.size(), undirected);
}

std::optional<NodeIndex> CitationNetwork::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

CitationNetwork CitationNetwork::induced(std::span<const NodeIndex> keep) const {
    std::vector<NodeIndex> sorted(keep.begin(), keep.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::vector<std::size_t> local(docs_.size(), static_cast<std::size_t>(-1));
    std::vector<Document> docs;
    docs.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        local.at(sorted[i]) = i;
        docs.push_back(docs_[sorted[i]]);
    }
    std::vector<Citation> citations;
    for (const auto& c : citations_)
        if (local[c.citing] != static_cast<std::size_t>(-1) && local[c.cited] != static_cast<std::size_t>(-1))
            citations.push_back({local[c.citing], local[c.cited]});
    return CitationNetwork(std::move(docs), std::move(citations));
}

ParsedCorpus parse_corpus(std::istream& nodes, std::istream& edges, const ParseOptions& options) {
    ParsedCorpus result;
    std::vector<Document> docs;
    std::map<std::string, NodeIndex, std::less<>> ids;

    std::string line;
    for (std::size_t line_no = 1; std::getline(nodes, line); ++line_no) {
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        Document doc = parse_document(std::string(body), line_no);
        if (!ids.emplace(doc.id, docs.size()).second)
            throw DataError("nodes line " + std::to_string(line_no) + ": duplicate id '" + doc.id + "'");
        docs.push_back(std::move(doc));
    }
    if (docs.empty()) throw DataError("nodes file contains no documents");

    std::vector<Citation> citations;
    std::set<Citation> seen;
    bool first_record = true;
    for (std::size_t line_no = 1; std::getline(edges, line); ++line_no) {
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto sep = body.find_first_of(",\t");
        if (sep == std::string_view::npos || body.find_first_of(",\t", sep + 1) != std::string_view::npos)
            throw DataError("edges line " + std::to_string(line_no) + ": expected two columns 'citing,cited'");
        const auto citing = trim(body.substr(0, sep));
        const auto cited = trim(body.substr(sep + 1));
        if (citing.empty() || cited.empty())
            throw DataError("edges line " + std::to_string(line_no) + ": empty id");
        if (std::exchange(first_record, false) && lowercase(std::string(citing)) == "citing" &&
            lowercase(std::string(cited)) == "cited")
            continue;

        const std::string edge_name = "(" + std::string(citing) + ", " + std::string(cited) + ")";
        if (citing == cited)
            throw DataError("edges line " + std::to_string(line_no) + ": self-loop " + edge_name);
        auto from = ids.find(citing);
        auto to = ids.find(cited);
        if (from == ids.end() || to == ids.end()) {
            const std::string missing(from == ids.end() ? citing : cited);
            const std::string msg = "edges line " + std::to_string(line_no) + ": unknown id '" + missing +
                                    "' in edge " + edge_name;
            if (!options.lenient) throw DataError(msg);
            result.warnings.push_back(msg + " (skipped)");
            log_warn(result.warnings.back());
            continue;
        }
        Citation c{from->second, to->second};
        if (!seen.insert(c).second) {
            result.warnings.push_back("edges line " + std::to_string(line_no) + ": duplicate edge " +
                                      edge_name + " collapsed");
            log_warn(result.warnings.back());
            continue;
        }
        citations.push_back(c);
    }
    result.network = CitationNetwork(std::move(docs), std::move(citations));
    return result;
}

ParsedCorpus load_corpus(const std::filesystem::path& nodes, const std::filesystem::path& edges,
                         const ParseOptions& options) {
    std::ifstream n(nodes);
    if (!n) throw DataError("cannot open nodes file " + nodes.string());
    std::ifstream e(edges);
    if (!e) throw DataError("cannot open edges file " + edges.string());
    return parse_corpus(n, e, options);
}

void write_nodes(std::ostream& out, const CitationNetwork& net) {
    for (const auto& doc : net.docs()) {
        json record;
        record["id"] = doc.id;
        if (doc.year) record["year"] = *doc.year;
        record["kind"] = std::string(to_string(doc.kind));
        if (doc.terms) {
            record["basic_terms"] = doc.terms->basic;
            record["clinical_terms"] = doc.terms->clinical;
        }
        if (!doc.raw_terms.empty()) record["terms"] = doc.raw_terms;
        if (doc.ext_citations) record["ext_citations"] = *doc.ext_citations;
        out << record.dump() << '\n';
    }
}

void write_edges(std::ostream& out, const CitationNetwork& net) {
    out << "citing,cited\n";
    for (const auto& c : net.citations()) out << net.doc(c.citing).id << ',' << net.doc(c.cited).id << '\n';
}

MappedGraph co_citation_projection(const CitationNetwork& net) {
    std::vector<std::size_t> local(net.size(), static_cast<std::size_t>(-1));
    MappedGraph out;
    for (NodeIndex i = 0; i < net.size(); ++i)
        if (net.in_degree(i) > 0) {
            local[i] = out.origin.size();
            out.origin.push_back(i);
        }

    std::map<std::pair<std::size_t, std::size_t>, double> weights;
    for (NodeIndex citing = 0; citing < net.size(); ++citing) {
        const auto refs = net.cites(citing);
        for (std::size_t a = 0; a < refs.size(); ++a)
            for (std::size_t b = a + 1; b < refs.size(); ++b) {
                auto u = local[refs[a]], v = local[refs[b]];
                if (u > v) std::swap(u, v);
                weights[{u, v}] += 1.0;
            }
    }
    std::vector<WeightedEdge> edges;
    edges.reserve(weights.size());
    for (const auto& [pair, w] : weights) edges.push_back({pair.first, pair.second, w});
    out.graph = Graph::from_edges(out.origin.size(), edges);
    return out;
}

} // namespace ktmap
