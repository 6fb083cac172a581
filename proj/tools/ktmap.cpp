// ktmap: command-line front end. Every stage reads the standard nodes/edges
// files (plus the side tables of earlier stages) and writes into --out.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ktmap/error.hpp"
#include "ktmap/log.hpp"
#include "ktmap/pipeline.hpp"
#include "ktmap/synth.hpp"

namespace fs = std::filesystem;
using namespace ktmap;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct Args {
    std::optional<std::string> config_file;
    std::map<std::string, std::string> settings;
    std::string out = ".";
    std::string fronts_file;
    std::string scores_file;
    std::string hubs_file;
    std::string format = "graphml";

    std::string preset = "planted";
    std::uint64_t seed = 0;
    std::size_t iterations = 3;
    std::size_t random_n = 2000;
    double random_p = 0.01;
    PlantedConfig planted;
};

// Flags that map one-to-one onto configuration keys.
void setting(CLI::App* app, Args& args, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option_function<std::string>(flag, [&args, key](const std::string& v) { args.settings[key] = v; }, help);
}

void input_flags(CLI::App* app, Args& args) {
    app->add_option("--config", args.config_file, "key = value configuration file");
    setting(app, args, "--nodes", "nodes", "documents, one JSON object per line");
    setting(app, args, "--edges", "edges", "citations as citing,cited rows");
    app->add_flag_callback("--lenient", [&args] { args.settings["lenient"] = "true"; },
                           "skip citations to unknown ids instead of failing");
    app->add_option("--out", args.out, "output directory")->capture_default_str();
}

void threshold_flags(CLI::App* app, Args& args) {
    setting(app, args, "--low", "low", "lower class threshold");
    setting(app, args, "--high", "high", "upper class threshold");
}

void cluster_flags(CLI::App* app, Args& args) {
    setting(app, args, "--max-depth", "max_depth", "deepest front level (root is 1)");
    setting(app, args, "--min-size", "min_size", "smallest front that is split again");
    setting(app, args, "--min-q", "min_q", "modularity a split must reach");
    setting(app, args, "--mode", "mode", "citation|cocitation");
    setting(app, args, "--refine", "refine", "polish after greedy merging: none|moves|kl");
    setting(app, args, "--threads", "threads", "worker threads");
}

void hub_flags(CLI::App* app, Args& args) {
    setting(app, args, "--degree-pct", "degree_pct", "degree quantile for hub candidates");
    setting(app, args, "--c-max", "c_max", "clustering ceiling, or 'median'");
    setting(app, args, "--p-min", "p_min", "minimum participation coefficient");
    setting(app, args, "--t-spread", "t_spread", "minimum spread of bridged front means");
}

PipelineConfig make_config(const Args& args, bool needs_inputs = true) {
    PipelineConfig config = args.config_file ? PipelineConfig::load(*args.config_file) : PipelineConfig{};
    for (const auto& [key, value] : args.settings) config.set(key, value);
    config.out_dir = args.out;
    if (needs_inputs) config.validate();
    return config;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << content;
}

fs::path out_dir(const PipelineConfig& config) {
    fs::create_directories(config.out_dir);
    return config.out_dir;
}

ParsedCorpus load(const PipelineConfig& config) {
    auto parsed = load_corpus(config.nodes, config.edges, ParseOptions{config.lenient});
    for (const auto& w : parsed.warnings) log_warn(w);
    return parsed;
}

std::vector<TranslationalProfile> profiles_for(const CitationNetwork& net, const PipelineConfig& config,
                                               const std::string& scores_file) {
    if (scores_file.empty()) {
        std::optional<Lexicon> lexicon;
        if (config.lexicon_basic) lexicon = Lexicon::load(*config.lexicon_basic, *config.lexicon_clinical);
        return score_documents(net, lexicon ? &*lexicon : nullptr, config.thresholds);
    }
    std::vector<TranslationalProfile> out;
    for (const auto& s : load_scores_csv(scores_file, net)) out.push_back({s, classify(s, config.thresholds)});
    return out;
}

// A report carrying only what the requested stage needs.
KTReport partial_report(CitationNetwork net, const PipelineConfig& config, const std::string& scores_file) {
    KTReport r;
    r.config = config;
    r.profiles = profiles_for(net, config, scores_file);
    r.core = std::move(net);
    r.graph = analysis_graph(r.core, config.mode);
    return r;
}

void require(const std::string& value, const std::string& flag) {
    if (value.empty()) throw UsageError(flag + " is required for this command");
}

void print_json(const nlohmann::ordered_json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_parse(const Args& args) {
    const auto config = make_config(args);
    const auto parsed = load(config);
    const auto dir = out_dir(config);
    std::ostringstream nodes, edges;
    write_nodes(nodes, parsed.network);
    write_edges(edges, parsed.network);
    write_file(dir / "nodes.jsonl", nodes.str());
    write_file(dir / "edges.csv", edges.str());
    print_json({{"nodes", parsed.network.size()},
                {"edges", parsed.network.citations().size()},
                {"warnings", parsed.warnings}});
    return kOk;
}

int cmd_select(const Args& args) {
    const auto config = make_config(args);
    const auto parsed = load(config);
    const auto core = select_top_cited(parsed.network, config.fraction, config.rank_by);
    const auto dir = out_dir(config);
    std::ostringstream nodes, edges;
    write_nodes(nodes, core);
    write_edges(edges, core);
    write_file(dir / "core.nodes.jsonl", nodes.str());
    write_file(dir / "core.edges.csv", edges.str());
    print_json({{"corpus_nodes", parsed.network.size()},
                {"selected_nodes", core.size()},
                {"selected_edges", core.citations().size()}});
    return kOk;
}

int cmd_fit_degrees(const Args& args) {
    const auto config = make_config(args);
    const auto parsed = load(config);
    std::vector<std::uint64_t> counts;
    for (NodeIndex i = 0; i < parsed.network.size(); ++i)
        counts.push_back(citation_rank_value(parsed.network, i, config.rank_by));
    const auto fit = fit_power_law(counts, {config.bootstrap, config.seed, config.threads});
    const auto json = power_law_json(fit);
    write_file(out_dir(config) / "powerlaw.json", json);
    std::cout << json;
    return kOk;
}

int cmd_score(const Args& args) {
    const auto config = make_config(args);
    const auto parsed = load(config);
    const auto profiles = profiles_for(parsed.network, config, "");
    write_file(out_dir(config) / "scores.csv", scores_csv(parsed.network, profiles));
    nlohmann::ordered_json j;
    try {
        const auto r = homophily_assortativity(parsed.network, scores_of(profiles));
        j["assortativity"] = r ? nlohmann::ordered_json(*r) : nlohmann::ordered_json(nullptr);
    } catch (const DataError& e) {
        j["assortativity"] = nullptr;
        j["assortativity_note"] = e.what();
    }
    print_json(j);
    return kOk;
}

int cmd_fronts(const Args& args) {
    const auto config = make_config(args);
    auto r = partial_report(load(config).network, config, args.scores_file);
    r.tree = hierarchical_fronts(r.graph.graph, config.hierarchy());
    const auto dir = out_dir(config);
    write_file(dir / "fronts.csv", fronts_csv(r));
    const auto json = fronts_json(r);
    write_file(dir / "fronts.json", json);
    std::cout << json;
    return kOk;
}

int cmd_metrics(const Args& args) {
    require(args.fronts_file, "--fronts");
    const auto config = make_config(args);
    auto r = partial_report(load(config).network, config, args.scores_file);
    r.tree = load_fronts_csv(args.fronts_file, r.core, r.graph);
    r.metrics = node_metrics(r.graph.graph, r.tree.level_labels(2), config.threads);
    const auto dir = out_dir(config);
    write_file(dir / "metrics.csv", metrics_csv(r));
    const auto fit = ck_scaling(r.graph.graph, {config.binning, 2});
    const auto json = scaling_json(fit);
    write_file(dir / "scaling.json", json);
    std::cout << json;
    return kOk;
}

HubReport hubs_of(const KTReport& r) {
    std::vector<std::string> ids;
    for (NodeIndex i = 0; i < r.graph.origin.size(); ++i) ids.push_back(r.id_of(i));
    return detect_translational_hubs(r.graph.graph, r.tree.level_labels(2), graph_scores(r.graph, r.profiles), ids,
                                     r.config.hubs);
}

int cmd_hubs(const Args& args) {
    require(args.fronts_file, "--fronts");
    require(args.scores_file, "--scores");
    const auto config = make_config(args);
    auto r = partial_report(load(config).network, config, args.scores_file);
    r.tree = load_fronts_csv(args.fronts_file, r.core, r.graph);
    r.hubs = hubs_of(r);
    const auto json = hubs_json(r);
    write_file(out_dir(config) / "hubs.json", json);
    std::cout << json;
    return kOk;
}

int cmd_mainpath(const Args& args) {
    const auto config = make_config(args);
    const auto parsed = load(config);
    const auto path = main_path(parsed.network);
    for (const auto& w : path.warnings) log_warn(w);
    const auto json = main_path_json(parsed.network, path);
    write_file(out_dir(config) / "mainpath.json", json);
    std::cout << json;
    return kOk;
}

int cmd_simulate(const Args& args) {
    const auto config = make_config(args, false);
    const auto dir = out_dir(config);
    CitationNetwork net;
    std::string truth;
    if (args.preset == "planted") {
        auto corpus = gen_planted_kt_network(args.planted, args.seed);
        truth = ground_truth_json(corpus.network, corpus.truth);
        net = std::move(corpus.network);
    } else if (args.preset == "hierarchical") {
        net = gen_deterministic_hierarchical(args.iterations);
        truth = nlohmann::ordered_json{{"preset", "hierarchical"}, {"iterations", args.iterations}}.dump(2) + "\n";
    } else if (args.preset == "random") {
        net = gen_random_graph(args.random_n, args.random_p, args.seed);
        truth = nlohmann::ordered_json{{"preset", "random"}, {"n", args.random_n}, {"p", args.random_p},
                                       {"seed", args.seed}}
                    .dump(2) +
                "\n";
    } else {
        throw UsageError("unknown preset '" + args.preset + "' (supported: planted, hierarchical, random)");
    }
    std::ostringstream nodes, edges;
    write_nodes(nodes, net);
    write_edges(edges, net);
    write_file(dir / "nodes.jsonl", nodes.str());
    write_file(dir / "edges.csv", edges.str());
    write_file(dir / "truth.json", truth);
    print_json({{"nodes", net.size()}, {"edges", net.citations().size()}, {"out", dir.string()}});
    return kOk;
}

int cmd_report(const Args& args) {
    const auto config = make_config(args, false);
    const auto report = run_pipeline(config);
    print_json({{"report", (config.out_dir / "report.json").string()},
                {"level2_fronts", report.tree.fronts_at(2).size()},
                {"hubs", report.hubs.hubs.size()}});
    return kOk;
}

int cmd_export(const Args& args) {
    require(args.fronts_file, "--fronts");
    require(args.scores_file, "--scores");
    const auto format = parse_graph_format(args.format);
    const auto config = make_config(args);
    auto r = partial_report(load(config).network, config, args.scores_file);
    r.tree = load_fronts_csv(args.fronts_file, r.core, r.graph);
    if (args.hubs_file.empty()) {
        r.hubs = hubs_of(r);
    } else {
        std::ifstream in(args.hubs_file);
        if (!in) throw DataError("cannot open hubs file " + args.hubs_file);
        std::vector<std::size_t> local(r.core.size(), static_cast<std::size_t>(-1));
        for (NodeIndex i = 0; i < r.graph.origin.size(); ++i) local[r.graph.origin[i]] = i;
        nlohmann::json hubs;
        try {
            hubs = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw DataError(args.hubs_file + ": " + e.what());
        }
        if (!hubs.is_array()) throw DataError(args.hubs_file + ": expected a JSON array of hubs");
        for (const auto& h : hubs) {
            if (!h.is_object() || !h.contains("id") || !h["id"].is_string())
                throw DataError(args.hubs_file + ": hub entries need a string id");
            const auto idx = r.core.find(h["id"].get<std::string>());
            if (!idx || local[*idx] == static_cast<std::size_t>(-1))
                throw DataError(args.hubs_file + ": unknown hub id '" + h["id"].get<std::string>() + "'");
            HubCandidate c;
            c.node = local[*idx];
            r.hubs.hubs.push_back(c);
        }
    }
    const auto file = out_dir(config) / (format == GraphFormat::Dot ? "graph.dot" : "graph.graphml");
    write_file(file, export_graph(r, format));
    std::cout << file.string() << '\n';
    return kOk;
}

int exit_code(StageError::Kind kind) {
    switch (kind) {
    case StageError::Kind::Usage: return kUsage;
    case StageError::Kind::Data: return kData;
    default: return kInternal;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ktmap: knowledge-translation maps of citation networks"};
    app.set_version_flag("--version", std::string(version()));
    app.require_subcommand(1);
    Args args;

    auto* parse = app.add_subcommand("parse", "validate and normalise a corpus");
    input_flags(parse, args);

    auto* select = app.add_subcommand("select", "keep the most cited fraction of the corpus");
    input_flags(select, args);
    setting(select, args, "--fraction", "fraction", "share of documents to keep, in (0, 1]");
    setting(select, args, "--rank-by", "rank_by", "in_degree|ext_citations");

    auto* fit = app.add_subcommand("fit-degrees", "fit a discrete power law to citation counts");
    input_flags(fit, args);
    setting(fit, args, "--rank-by", "rank_by", "in_degree|ext_citations");
    fit->add_option_function<std::string>(
           "--bootstrap", [&args](const std::string& v) { args.settings["bootstrap"] = v.empty() ? "100" : v; },
           "goodness-of-fit p-value from N bootstrap replicates (100 when N is omitted)")
        ->expected(0, 1);
    setting(fit, args, "--seed", "seed", "bootstrap seed");
    setting(fit, args, "--threads", "threads", "worker threads");

    auto* score = app.add_subcommand("score", "basic/clinical score per document");
    input_flags(score, args);
    setting(score, args, "--lexicon-basic", "lexicon_basic", "basic-science terms, one per line");
    setting(score, args, "--lexicon-clinical", "lexicon_clinical", "clinical terms, one per line");
    threshold_flags(score, args);

    auto* fronts = app.add_subcommand("fronts", "hierarchical research fronts");
    input_flags(fronts, args);
    cluster_flags(fronts, args);
    fronts->add_option("--scores", args.scores_file, "scores.csv for per-front mean T");
    threshold_flags(fronts, args);

    auto* metrics = app.add_subcommand("metrics", "per-node k, c, P, z and the C(k) scaling fit");
    input_flags(metrics, args);
    metrics->add_option("--fronts", args.fronts_file, "fronts.csv from the fronts command");
    setting(metrics, args, "--binning", "binning", "log2|none");
    setting(metrics, args, "--mode", "mode", "citation|cocitation");
    setting(metrics, args, "--threads", "threads", "worker threads");

    auto* hubs = app.add_subcommand("hubs", "rank translational hub candidates");
    input_flags(hubs, args);
    hubs->add_option("--fronts", args.fronts_file, "fronts.csv from the fronts command");
    hubs->add_option("--scores", args.scores_file, "scores.csv from the score command");
    setting(hubs, args, "--mode", "mode", "citation|cocitation");
    hub_flags(hubs, args);
    threshold_flags(hubs, args);

    auto* mainpath = app.add_subcommand("mainpath", "search-path-count main path");
    input_flags(mainpath, args);

    auto* simulate = app.add_subcommand("simulate", "write a synthetic corpus with ground truth");
    simulate->add_option("--preset", args.preset, "planted|hierarchical|random")->capture_default_str();
    simulate->add_option("--seed", args.seed, "generator seed")->capture_default_str();
    simulate->add_option("--out", args.out, "output directory")->capture_default_str();
    simulate->add_option("--iterations", args.iterations, "hierarchical: model iterations")->capture_default_str();
    simulate->add_option("--n", args.random_n, "random: node count")->capture_default_str();
    simulate->add_option("--p", args.random_p, "random: link probability")->capture_default_str();
    simulate->add_option("--branching", args.planted.branching, "planted: blocks per level")->delimiter(',');
    simulate->add_option("--leaf-size", args.planted.leaf_size, "planted: nodes per leaf block");
    simulate->add_option("--p-within", args.planted.p_within, "planted: link probability per level")
        ->delimiter(',');
    simulate->add_option("--p-between", args.planted.p_between, "planted: link probability across top blocks");
    simulate->add_option("--homophily", args.planted.homophily, "planted: homophily strength in [0, 1]");
    simulate->add_option("--hubs", args.planted.n_hubs, "planted: bridging hubs");
    simulate->add_option("--hub-links", args.planted.hub_links, "planted: links per bridged block");
    simulate->add_option("--term-noise", args.planted.term_noise, "planted: jitter on target T");

    auto* report = app.add_subcommand("report", "run every stage and write report.json");
    input_flags(report, args);
    setting(report, args, "--fraction", "fraction", "share of documents to keep");
    setting(report, args, "--rank-by", "rank_by", "in_degree|ext_citations");
    setting(report, args, "--lexicon-basic", "lexicon_basic", "basic-science terms, one per line");
    setting(report, args, "--lexicon-clinical", "lexicon_clinical", "clinical terms, one per line");
    threshold_flags(report, args);
    cluster_flags(report, args);
    hub_flags(report, args);
    setting(report, args, "--binning", "binning", "log2|none");
    setting(report, args, "--bootstrap", "bootstrap", "power-law bootstrap replicates");
    setting(report, args, "--seed", "seed", "seed for stochastic steps");

    auto* exporter = app.add_subcommand("export", "annotated graph as GraphML or dot");
    input_flags(exporter, args);
    exporter->add_option("--fronts", args.fronts_file, "fronts.csv");
    exporter->add_option("--scores", args.scores_file, "scores.csv");
    exporter->add_option("--hubs", args.hubs_file, "hubs.json; recomputed when omitted");
    exporter->add_option("--format", args.format, "graphml|dot")->capture_default_str();
    setting(exporter, args, "--mode", "mode", "citation|cocitation");
    hub_flags(exporter, args);
    threshold_flags(exporter, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    const std::map<CLI::App*, int (*)(const Args&)> commands{
        {parse, cmd_parse},   {select, cmd_select},     {fit, cmd_fit_degrees}, {score, cmd_score},
        {fronts, cmd_fronts}, {metrics, cmd_metrics},   {hubs, cmd_hubs},       {mainpath, cmd_mainpath},
        {simulate, cmd_simulate}, {report, cmd_report}, {exporter, cmd_export}};

    try {
        for (const auto& [sub, run] : commands)
            if (sub->parsed()) return run(args);
        return kUsage;
    } catch (const StageError& e) {
        log(LogLevel::Error, e.what());
        return exit_code(e.kind());
    } catch (const UsageError& e) {
        log(LogLevel::Error, e.what());
        return kUsage;
    } catch (const DataError& e) {
        log(LogLevel::Error, e.what());
        return kData;
    } catch (const fs::filesystem_error& e) {
        log(LogLevel::Error, e.what());
        return kData;
    } catch (const std::exception& e) {
        log(LogLevel::Error, std::string("internal error: ") + e.what());
        return kInternal;
    }
}
