#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ktmap/corpus.hpp"
#include "ktmap/fronts.hpp"
#include "ktmap/hubs.hpp"
#include "ktmap/metrics.hpp"
#include "ktmap/selection.hpp"
#include "ktmap/translational.hpp"

namespace ktmap {

std::string_view version();

enum class ClusterMode { Citation, CoCitation };

struct PipelineConfig {
    std::filesystem::path nodes;
    std::filesystem::path edges;
    std::optional<std::filesystem::path> lexicon_basic;
    std::optional<std::filesystem::path> lexicon_clinical;
    std::filesystem::path out_dir = ".";

    double fraction = 0.20;
    RankBy rank_by = RankBy::InDegree;
    bool lenient = false;
    Thresholds thresholds;
    HubConfig hubs;
    std::size_t max_depth = 4;
    std::size_t min_front_size = 10;
    double min_q_gain = 0.05;
    /// Polishing applied after each greedy clustering.
    Refinement refine = Refinement::KernighanLin;
    ClusterMode mode = ClusterMode::Citation;
    Binning binning = Binning::Log2;
    std::size_t bootstrap = 0;
    std::uint64_t seed = 0;
    /// Execution only; results do not depend on it.
    unsigned threads = 1;

    /// Applies one `key = value` setting; UsageError on unknown keys or bad values.
    /// Relative paths are resolved against `base_dir`.
    void set(std::string_view key, std::string_view value, const std::filesystem::path& base_dir = {});

    /// Reads `key = value` lines ('#' comments allowed).
    static PipelineConfig load(const std::filesystem::path& file);

    /// Checks numeric ranges and that input files exist.
    void validate() const;

    HierarchyOptions hierarchy() const;
};

/// Graph the fronts, metrics and hubs are computed on; node i is network node origin[i].
using AnalysisGraph = MappedGraph;

/// Everything the pipeline computes; rendered to JSON by `report_json`.
struct KTReport {
    PipelineConfig config;
    std::string generated_at;

    std::size_t corpus_nodes = 0;
    std::size_t corpus_edges = 0;
    CitationNetwork core;
    std::vector<TranslationalProfile> profiles;

    std::optional<PowerLawFit> power_law;
    std::string power_law_note;
    std::optional<double> assortativity;
    std::string assortativity_note;

    AnalysisGraph graph;
    FrontTree tree;
    std::vector<FrontSummary> level2_summary;
    std::vector<NodeMetrics> metrics;
    std::optional<ScalingFit> scaling;
    std::string scaling_note;
    HubReport hubs;
    std::optional<MainPath> main_path;
    std::string main_path_note;

    std::vector<std::string> warnings;

    /// Per analysis-graph node, the document id.
    std::string id_of(NodeIndex graph_node) const { return core.doc(graph.origin.at(graph_node)).id; }
};

/// A pipeline failure tagged with the stage that raised it.
class StageError : public std::runtime_error {
public:
    enum class Kind { Usage, Data, Internal };

    StageError(std::string stage, Kind kind, const std::string& message)
        : std::runtime_error(stage + ": " + message), stage_(std::move(stage)), kind_(kind) {}

    const std::string& stage() const { return stage_; }
    Kind kind() const { return kind_; }

private:
    std::string stage_;
    Kind kind_;
};

/// Builds the analysis graph for the configured mode.
AnalysisGraph analysis_graph(const CitationNetwork& net, ClusterMode mode);

/// Scores restricted to the analysis graph's nodes.
std::vector<TScore> graph_scores(const AnalysisGraph& graph, std::span<const TranslationalProfile> profiles);

/// Stages after parsing and selection, on an already selected core network.
KTReport analyse(CitationNetwork core, const PipelineConfig& config, const Lexicon* lexicon = nullptr);

/// parse -> select -> score -> fronts -> metrics -> hubs -> main path -> report.
/// Writes every intermediate artifact and report.json into config.out_dir.
/// On failure an INCOMPLETE marker naming the stage is written and StageError thrown.
KTReport run_pipeline(const PipelineConfig& config);

/// Report JSON. `with_timestamp` false omits generated_at.
std::string report_json(const KTReport& report, bool with_timestamp = true);

// Side tables, each readable back by the loaders below.
std::string scores_csv(const CitationNetwork& net, std::span<const TranslationalProfile> profiles);
std::string fronts_csv(const KTReport& report);
std::string fronts_json(const KTReport& report);
std::string metrics_csv(const KTReport& report);
std::string scaling_json(const ScalingFit& fit);
std::string power_law_json(const PowerLawFit& fit);
std::string hubs_json(const KTReport& report);
std::string main_path_json(const CitationNetwork& net, const MainPath& path);

/// Reads `id,T,class` rows; unknown ids throw DataError, missing ids stay unscored.
std::vector<TScore> load_scores_csv(const std::filesystem::path& file, const CitationNetwork& net);

/// Rebuilds a FrontTree from `id,front_path` rows over the given analysis graph.
FrontTree load_fronts_csv(const std::filesystem::path& file, const CitationNetwork& net, const AnalysisGraph& graph);

/// Builds a tree from per-node dotted paths ("2.1.3" style, level-2 first).
FrontTree front_tree_from_paths(std::span<const std::string> paths);

enum class GraphFormat { GraphML, Dot };

/// Parses "graphml" or "dot"; the UsageError lists the supported formats.
GraphFormat parse_graph_format(std::string_view name);

/// Annotated citation graph: front path, T, class and hub flag per node.
std::string export_graph(const KTReport& report, GraphFormat format);

} // namespace ktmap
