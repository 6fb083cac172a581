#include "ktmap/pipeline.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include "ktmap/error.hpp"
#include "ktmap/log.hpp"

#ifndef KTMAP_VERSION
#define KTMAP_VERSION "0.0.0"
#endif

namespace ktmap {

std::string_view version() { return KTMAP_VERSION; }

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end)
        throw UsageError("invalid value '" + std::string(value) + "' for " + std::string(key));
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw UsageError("invalid boolean '" + std::string(value) + "' for " + std::string(key));
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view value) {
    std::filesystem::path p{std::string(value)};
    return p.is_absolute() || base.empty() ? p : base / p;
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << content;
}

template <typename Fn>
auto run_stage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const UsageError& e) {
        throw StageError(stage, StageError::Kind::Usage, e.what());
    } catch (const DataError& e) {
        throw StageError(stage, StageError::Kind::Data, e.what());
    } catch (const std::exception& e) {
        throw StageError(stage, StageError::Kind::Internal, e.what());
    }
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.emplace_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

} // namespace

void PipelineConfig::set(std::string_view key, std::string_view value, const std::filesystem::path& base_dir) {
    value = trim(value);
    if (key == "nodes") nodes = resolve(base_dir, value);
    else if (key == "edges") edges = resolve(base_dir, value);
    else if (key == "lexicon_basic") lexicon_basic = resolve(base_dir, value);
    else if (key == "lexicon_clinical") lexicon_clinical = resolve(base_dir, value);
    else if (key == "out") out_dir = resolve(base_dir, value);
    else if (key == "fraction") fraction = parse_number<double>(key, value);
    else if (key == "rank_by") {
        if (value == "in_degree") rank_by = RankBy::InDegree;
        else if (value == "ext_citations") rank_by = RankBy::ExternalCitations;
        else throw UsageError("rank_by must be in_degree or ext_citations");
    }
    else if (key == "lenient") lenient = parse_bool(key, value);
    else if (key == "low") thresholds.low = parse_number<double>(key, value);
    else if (key == "high") thresholds.high = parse_number<double>(key, value);
    else if (key == "degree_pct") hubs.degree_pct = parse_number<double>(key, value);
    else if (key == "c_max") {
        if (value == "median") hubs.c_max.reset();
        else hubs.c_max = parse_number<double>(key, value);
    }
    else if (key == "p_min") hubs.p_min = parse_number<double>(key, value);
    else if (key == "t_spread") hubs.t_spread_min = parse_number<double>(key, value);
    else if (key == "max_depth") max_depth = parse_number<std::size_t>(key, value);
    else if (key == "min_size") min_front_size = parse_number<std::size_t>(key, value);
    else if (key == "min_q") min_q_gain = parse_number<double>(key, value);
    else if (key == "mode") {
        if (value == "citation") mode = ClusterMode::Citation;
        else if (value == "cocitation") mode = ClusterMode::CoCitation;
        else throw UsageError("mode must be citation or cocitation");
    }
    else if (key == "binning") {
        if (value == "log2") binning = Binning::Log2;
        else if (value == "none") binning = Binning::None;
        else throw UsageError("binning must be log2 or none");
    }
    else if (key == "refine") {
        if (value == "none") refine = Refinement::None;
        else if (value == "moves") refine = Refinement::VertexMoves;
        else if (value == "kl") refine = Refinement::KernighanLin;
        else throw UsageError("refine must be none, moves or kl");
    }
    else if (key == "bootstrap") bootstrap = parse_number<std::size_t>(key, value);
    else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
    else if (key == "threads") threads = parse_number<unsigned>(key, value);
    else throw UsageError("unknown configuration key '" + std::string(key) + "'");
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw UsageError("cannot open config file " + file.string());
    PipelineConfig config;
    const auto base = file.parent_path();
    std::string line;
    for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos)
            throw UsageError(file.string() + ":" + std::to_string(line_no) + ": expected key = value");
        config.set(trim(body.substr(0, eq)), body.substr(eq + 1), base);
    }
    return config;
}

void PipelineConfig::validate() const {
    if (nodes.empty() || edges.empty()) throw UsageError("both a nodes file and an edges file are required");
    for (const auto& p : {nodes, edges})
        if (!std::filesystem::exists(p)) throw UsageError("input file not found: " + p.string());
    if (lexicon_basic.has_value() != lexicon_clinical.has_value())
        throw UsageError("lexicon_basic and lexicon_clinical must be given together");
    for (const auto& p : {lexicon_basic, lexicon_clinical})
        if (p && !std::filesystem::exists(*p)) throw UsageError("lexicon file not found: " + p->string());
    if (!(fraction > 0.0 && fraction <= 1.0)) throw UsageError("fraction must lie in (0, 1]");
    thresholds.validate();
    hubs.validate();
    if (max_depth < 2) throw UsageError("max_depth must be at least 2");
    if (min_front_size < 2) throw UsageError("min_size must be at least 2");
    if (threads == 0) throw UsageError("threads must be at least 1");
}

HierarchyOptions PipelineConfig::hierarchy() const {
    return {max_depth, min_front_size, min_q_gain, threads, refine};
}

AnalysisGraph analysis_graph(const CitationNetwork& net, ClusterMode mode) {
    if (mode == ClusterMode::CoCitation) return co_citation_projection(net);
    AnalysisGraph g;
    g.graph = net.projection();
    g.origin.resize(net.size());
    for (NodeIndex i = 0; i < net.size(); ++i) g.origin[i] = i;
    return g;
}

std::vector<TScore> graph_scores(const AnalysisGraph& graph, std::span<const TranslationalProfile> profiles) {
    std::vector<TScore> out;
    out.reserve(graph.origin.size());
    for (auto i : graph.origin) out.push_back(profiles[i].score);
    return out;
}

KTReport analyse(CitationNetwork core, const PipelineConfig& config, const Lexicon* lexicon) {
    KTReport r;
    r.config = config;
    r.core = std::move(core);

    r.profiles = run_stage("score", [&] { return score_documents(r.core, lexicon, config.thresholds); });
    run_stage("score", [&] {
        try {
            r.assortativity = homophily_assortativity(r.core, scores_of(r.profiles));
            if (!r.assortativity) r.assortativity_note = "undefined: zero score variance across citations";
        } catch (const DataError& e) {
            r.assortativity_note = e.what();
        }
    });

    run_stage("fronts", [&] {
        r.graph = analysis_graph(r.core, config.mode);
        r.tree = hierarchical_fronts(r.graph.graph, config.hierarchy());
    });
    const auto labels = r.tree.level_labels(2);
    const auto scores = graph_scores(r.graph, r.profiles);
    r.level2_summary = front_score_summary(labels, scores, config.thresholds);

    run_stage("metrics", [&] {
        r.metrics = node_metrics(r.graph.graph, labels, config.threads);
        try {
            r.scaling = ck_scaling(r.graph.graph, {config.binning, 2});
        } catch (const DataError& e) {
            r.scaling_note = e.what();
        }
    });

    run_stage("hubs", [&] {
        std::vector<std::string> ids;
        ids.reserve(r.graph.origin.size());
        for (NodeIndex i = 0; i < r.graph.origin.size(); ++i) ids.push_back(r.id_of(i));
        r.hubs = detect_translational_hubs(r.graph.graph, labels, scores, ids, config.hubs);
    });

    run_stage("mainpath", [&] {
        try {
            r.main_path = main_path(r.core);
            for (const auto& w : r.main_path->warnings) r.warnings.push_back(w);
        } catch (const DataError& e) {
            r.main_path_note = e.what();
        }
    });
    return r;
}

KTReport run_pipeline(const PipelineConfig& config) {
    std::filesystem::create_directories(config.out_dir);
    const auto marker = config.out_dir / "INCOMPLETE";
    std::filesystem::remove(marker);
    try {
        run_stage("config", [&] { config.validate(); });

        std::optional<Lexicon> lexicon;
        auto parsed = run_stage("parse", [&] {
            if (config.lexicon_basic) lexicon = Lexicon::load(*config.lexicon_basic, *config.lexicon_clinical);
            return load_corpus(config.nodes, config.edges, ParseOptions{config.lenient});
        });
        const auto& full = parsed.network;

        std::optional<PowerLawFit> fit;
        std::string fit_note;
        auto core = run_stage("select", [&] {
            std::vector<std::uint64_t> counts;
            counts.reserve(full.size());
            for (NodeIndex i = 0; i < full.size(); ++i) counts.push_back(citation_rank_value(full, i, config.rank_by));
            try {
                fit = fit_power_law(counts, {config.bootstrap, config.seed, config.threads});
            } catch (const DataError& e) {
                fit_note = e.what();
            }
            auto selected = select_top_cited(full, config.fraction, config.rank_by);
            std::ostringstream nodes, edges;
            write_nodes(nodes, selected);
            write_edges(edges, selected);
            write_file(config.out_dir / "core.nodes.jsonl", nodes.str());
            write_file(config.out_dir / "core.edges.csv", edges.str());
            return selected;
        });

        KTReport report = analyse(std::move(core), config, lexicon ? &*lexicon : nullptr);
        report.generated_at = utc_now();
        report.corpus_nodes = full.size();
        report.corpus_edges = full.citations().size();
        report.power_law = fit;
        report.power_law_note = fit_note;
        report.warnings.insert(report.warnings.begin(), parsed.warnings.begin(), parsed.warnings.end());

        run_stage("report", [&] {
            const auto& dir = config.out_dir;
            write_file(dir / "scores.csv", scores_csv(report.core, report.profiles));
            write_file(dir / "fronts.csv", fronts_csv(report));
            write_file(dir / "fronts.json", fronts_json(report));
            write_file(dir / "metrics.csv", metrics_csv(report));
            if (report.scaling) write_file(dir / "scaling.json", scaling_json(*report.scaling));
            if (report.power_law) write_file(dir / "powerlaw.json", power_law_json(*report.power_law));
            write_file(dir / "hubs.json", hubs_json(report));
            if (report.main_path) write_file(dir / "mainpath.json", main_path_json(report.core, *report.main_path));
            write_file(dir / "report.json", report_json(report));
        });
        return report;
    } catch (const StageError& e) {
        std::ofstream(marker) << "stage=" << e.stage() << "\nerror=" << e.what() << "\n";
        throw;
    }
}

std::vector<TScore> load_scores_csv(const std::filesystem::path& file, const CitationNetwork& net) {
    std::ifstream in(file);
    if (!in) throw DataError("cannot open scores file " + file.string());
    std::vector<TScore> scores(net.size());
    std::string line;
    for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto fields = split_csv_line(body);
        if (fields.size() < 2) throw DataError(file.string() + ":" + std::to_string(line_no) + ": expected id,T[,class]");
        if (line_no == 1 && fields[0] == "id") continue;
        const auto idx = net.find(fields[0]);
        if (!idx) throw DataError(file.string() + ":" + std::to_string(line_no) + ": unknown id '" + fields[0] + "'");
        if (!fields[1].empty()) scores[*idx] = parse_number<double>("T", fields[1]);
    }
    return scores;
}

FrontTree front_tree_from_paths(std::span<const std::string> paths) {
    std::vector<Front> fronts(1);
    fronts[0].members.resize(paths.size());
    for (NodeIndex i = 0; i < paths.size(); ++i) fronts[0].members[i] = i;

    std::map<std::string, std::size_t> by_path;
    auto ensure = [&](const std::string& path, std::size_t level, std::size_t parent) {
        auto [it, inserted] = by_path.emplace(path, fronts.size());
        if (inserted) {
            Front f;
            f.path = path;
            f.level = level;
            f.parent = parent;
            fronts[parent].children.push_back(fronts.size());
            fronts.push_back(std::move(f));
        }
        return it->second;
    };
    for (NodeIndex i = 0; i < paths.size(); ++i) {
        if (paths[i].empty()) throw DataError("node " + std::to_string(i) + " has no front path");
        std::size_t parent = 0, level = 2;
        std::string prefix;
        const std::string_view full(paths[i]);
        for (std::size_t start = 0; start <= full.size();) {
            const auto dot = std::min(full.find('.', start), full.size());
            const auto piece = full.substr(start, dot - start);
            start = dot + 1;
            if (piece.empty()) throw DataError("malformed front path '" + paths[i] + "'");
            prefix += (prefix.empty() ? "" : ".") + std::string(piece);
            parent = ensure(prefix, level++, parent);
            fronts[parent].members.push_back(i);
        }
    }
    for (const auto& f : fronts)
        if ((f.children.size() == 1 && f.level > 1) || (!f.children.empty() && [&] {
                std::size_t covered = 0;
                for (auto c : f.children) covered += fronts[c].members.size();
                return covered != f.members.size();
            }()))
            throw DataError("front paths do not form a nested partition at '" + f.path + "'");
    return FrontTree(std::move(fronts), paths.size());
}

FrontTree load_fronts_csv(const std::filesystem::path& file, const CitationNetwork& net, const AnalysisGraph& graph) {
    std::ifstream in(file);
    if (!in) throw DataError("cannot open fronts file " + file.string());
    std::vector<std::size_t> local(net.size(), static_cast<std::size_t>(-1));
    for (NodeIndex i = 0; i < graph.origin.size(); ++i) local[graph.origin[i]] = i;
    std::vector<std::string> paths(graph.origin.size());
    std::string line;
    for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto fields = split_csv_line(body);
        if (fields.size() != 2) throw DataError(file.string() + ":" + std::to_string(line_no) + ": expected id,front_path");
        if (line_no == 1 && fields[0] == "id") continue;
        const auto idx = net.find(fields[0]);
        if (!idx || local[*idx] == static_cast<std::size_t>(-1))
            throw DataError(file.string() + ":" + std::to_string(line_no) + ": unknown id '" + fields[0] + "'");
        paths[local[*idx]] = fields[1];
    }
    return front_tree_from_paths(paths);
}

} // namespace ktmap
