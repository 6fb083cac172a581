#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ktmap/graph.hpp"

namespace ktmap {

enum class DocKind { Paper, Patent };

std::string_view to_string(DocKind kind);

struct TermCounts {
    std::uint64_t basic = 0;
    std::uint64_t clinical = 0;

    friend bool operator==(const TermCounts&, const TermCounts&) = default;
};

/// One paper or patent in the corpus.
struct Document {
    std::string id;
    std::optional<int> year;
    DocKind kind = DocKind::Paper;
    /// Pre-counted basic/clinical terms. When absent, `raw_terms` are counted
    /// against a lexicon at scoring time.
    std::optional<TermCounts> terms;
    std::vector<std::string> raw_terms;
    /// Citation count from an external source; only used for ranking on request.
    std::optional<std::uint64_t> ext_citations;
};

/// Disjoint sets of lowercase basic and clinical terms.
class Lexicon {
public:
    Lexicon() = default;
    /// Terms are lowercased; a term present on both sides throws DataError.
    Lexicon(std::set<std::string> basic, std::set<std::string> clinical);

    /// One term per line; blank lines and lines starting with '#' are skipped.
    static Lexicon load(const std::filesystem::path& basic, const std::filesystem::path& clinical);

    const std::set<std::string>& basic() const { return basic_; }
    const std::set<std::string>& clinical() const { return clinical_; }

private:
    std::set<std::string> basic_;
    std::set<std::string> clinical_;
};

/// Counts exact matches with multiplicity. Callers pass lowercase tokens.
TermCounts count_terms(std::span<const std::string> raw_terms, const Lexicon& lexicon);

/// Resolved term counts for a document: its pre-counted terms when present,
/// otherwise its raw terms counted against `lexicon` (zero without one).
TermCounts document_terms(const Document& doc, const Lexicon* lexicon);

struct Citation {
    NodeIndex citing = 0;
    NodeIndex cited = 0;

    friend auto operator<=>(const Citation&, const Citation&) = default;
};

/// Directed citation graph over a validated set of documents. Immutable once
/// built; the undirected projection is computed eagerly.
class CitationNetwork {
public:
    CitationNetwork() = default;
    /// Validates ids (non-empty, unique) and citations (in range, no self-loop).
    /// Duplicate citations are collapsed.
    CitationNetwork(std::vector<Document> docs, std::vector<Citation> citations);

    std::size_t size() const { return docs_.size(); }
    bool empty() const { return docs_.empty(); }
    std::span<const Document> docs() const { return docs_; }
    const Document& doc(NodeIndex i) const { return docs_.at(i); }
    std::optional<NodeIndex> find(std::string_view id) const;

    /// Sorted by (citing, cited).
    std::span<const Citation> citations() const { return citations_; }
    std::span<const NodeIndex> cites(NodeIndex i) const { return cites_.at(i); }
    std::span<const NodeIndex> cited_by(NodeIndex i) const { return cited_by_.at(i); }
    std::size_t in_degree(NodeIndex i) const { return cited_by_.at(i).size(); }
    std::size_t out_degree(NodeIndex i) const { return cites_.at(i).size(); }

    /// Direction dropped, reciprocal citations merged, unit weights.
    const Graph& projection() const { return projection_; }

    /// Network induced on `keep` (indices into this network, kept in ascending order).
    CitationNetwork induced(std::span<const NodeIndex> keep) const;

private:
    std::vector<Document> docs_;
    std::unordered_map<std::string, NodeIndex> index_;
    std::vector<Citation> citations_;
    std::vector<std::vector<NodeIndex>> cites_;
    std::vector<std::vector<NodeIndex>> cited_by_;
    Graph projection_;
};

struct ParseOptions {
    /// Skip citations whose endpoints are unknown instead of failing.
    bool lenient = false;
};

struct ParsedCorpus {
    CitationNetwork network;
    std::vector<std::string> warnings;
};

/// Parses a JSON-lines nodes stream and a `citing,cited` edges stream.
/// Errors (DataError) name the offending id, edge or line number.
ParsedCorpus parse_corpus(std::istream& nodes, std::istream& edges, const ParseOptions& options = {});
ParsedCorpus load_corpus(const std::filesystem::path& nodes, const std::filesystem::path& edges,
                         const ParseOptions& options = {});

/// Writers for the same formats `parse_corpus` reads.
void write_nodes(std::ostream& out, const CitationNetwork& net);
void write_edges(std::ostream& out, const CitationNetwork& net);

/// Co-citation graph: node i is the cited document `origin[i]`; edge weight is
/// the number of documents citing both endpoints.
MappedGraph co_citation_projection(const CitationNetwork& net);

} // namespace ktmap
