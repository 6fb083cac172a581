#include <charconv>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ktmap/error.hpp"
#include "ktmap/pipeline.hpp"

namespace ktmap {
namespace {

using nlohmann::ordered_json;

std::string fmt(double x) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc() ? std::string(buf, ptr) : std::to_string(x);
}

std::string fmt(const std::optional<double>& x) { return x ? fmt(*x) : std::string(); }

ordered_json opt(const std::optional<double>& x) { return x ? ordered_json(*x) : ordered_json(nullptr); }

std::string front_path_text(const Front& f) { return f.path.empty() ? "root" : f.path; }

std::string_view mode_name(ClusterMode m) { return m == ClusterMode::CoCitation ? "cocitation" : "citation"; }

ordered_json config_json(const PipelineConfig& c) {
    ordered_json j;
    j["nodes"] = c.nodes.string();
    j["edges"] = c.edges.string();
    j["lexicon_basic"] = c.lexicon_basic ? ordered_json(c.lexicon_basic->string()) : ordered_json(nullptr);
    j["lexicon_clinical"] = c.lexicon_clinical ? ordered_json(c.lexicon_clinical->string()) : ordered_json(nullptr);
    j["out"] = c.out_dir.string();
    j["fraction"] = c.fraction;
    j["rank_by"] = c.rank_by == RankBy::ExternalCitations ? "ext_citations" : "in_degree";
    j["lenient"] = c.lenient;
    j["low"] = c.thresholds.low;
    j["high"] = c.thresholds.high;
    j["degree_pct"] = c.hubs.degree_pct;
    j["c_max"] = c.hubs.c_max ? ordered_json(*c.hubs.c_max) : ordered_json("median");
    j["p_min"] = c.hubs.p_min;
    j["t_spread"] = c.hubs.t_spread_min;
    j["max_depth"] = c.max_depth;
    j["min_size"] = c.min_front_size;
    j["min_q"] = c.min_q_gain;
    j["refine"] = c.refine == Refinement::None ? "none" : c.refine == Refinement::VertexMoves ? "moves" : "kl";
    j["mode"] = mode_name(c.mode);
    j["binning"] = c.binning == Binning::None ? "none" : "log2";
    j["bootstrap"] = c.bootstrap;
    j["seed"] = c.seed;
    return j;
}

ordered_json power_law_object(const PowerLawFit& fit) {
    ordered_json j;
    j["alpha"] = fit.alpha;
    j["xmin"] = fit.xmin;
    j["ks"] = fit.ks_distance;
    j["n_tail"] = fit.n_tail;
    if (fit.p_value) {
        j["p_value"] = *fit.p_value;
        j["bootstrap_replicates"] = fit.bootstrap_replicates;
    }
    j["dropped_zeros"] = fit.dropped_zeros;
    return j;
}

ordered_json scaling_object(const ScalingFit& fit) {
    ordered_json j;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["r2"] = fit.r2;
    j["n_bins"] = fit.n_bins;
    j["excluded_nodes"] = fit.excluded_nodes;
    ordered_json bins = ordered_json::array();
    for (const auto& b : fit.bins)
        bins.push_back({{"k_low", b.k_low}, {"k_high", b.k_high}, {"nodes", b.nodes}, {"center", b.center},
                        {"mean_c", b.mean_c}});
    j["bins"] = std::move(bins);
    return j;
}

// Summary of every front in the tree, computed from its members' scores.
ordered_json fronts_object(const KTReport& r) {
    const auto scores = graph_scores(r.graph, r.profiles);
    ordered_json list = ordered_json::array();
    for (const auto& f : r.tree.fronts()) {
        std::vector<std::size_t> labels(f.members.size(), 0);
        std::vector<TScore> member_scores;
        member_scores.reserve(f.members.size());
        for (auto i : f.members) member_scores.push_back(scores[i]);
        const auto s = f.members.empty() ? FrontSummary{}
                                         : front_score_summary(labels, member_scores, r.config.thresholds).front();
        ordered_json j;
        j["path"] = front_path_text(f);
        j["level"] = f.level;
        j["parent"] = f.parent ? ordered_json(front_path_text(r.tree.fronts()[*f.parent])) : ordered_json(nullptr);
        j["size"] = f.members.size();
        j["scored"] = s.scored;
        j["mean_t"] = opt(s.mean_t);
        j["unscored_share"] = s.unscored_share;
        j["all_unscored"] = s.all_unscored;
        j["class"] = to_string(s.cls);
        j["class_counts"] = {{"basic", s.class_counts[0]},
                             {"translational", s.class_counts[1]},
                             {"clinical", s.class_counts[2]},
                             {"unscored", s.class_counts[3]}};
        j["split_q"] = opt(f.split_q);
        ordered_json children = ordered_json::array();
        for (auto c : f.children) children.push_back(r.tree.fronts()[c].path);
        j["children"] = std::move(children);
        list.push_back(std::move(j));
    }
    ordered_json out;
    out["depth"] = r.tree.depth();
    out["level2_count"] = r.tree.fronts_at(2).size();
    out["level2_q"] = opt(r.tree.fronts().empty() ? std::nullopt : r.tree.fronts()[0].split_q);
    out["fronts"] = std::move(list);
    return out;
}

std::string level2_path(const KTReport&, std::size_t label) {
    // Level-2 labels are numbered by first appearance, as are level-2 paths.
    return std::to_string(label + 1);
}

ordered_json hubs_object(const KTReport& r) {
    ordered_json list = ordered_json::array();
    for (const auto& h : r.hubs.hubs) {
        ordered_json j;
        j["id"] = r.id_of(h.node);
        j["rank"] = h.rank;
        j["k"] = h.degree;
        j["c"] = opt(h.clustering);
        j["P"] = h.participation;
        ordered_json bridged = ordered_json::array();
        for (auto f : h.bridged_fronts) bridged.push_back(level2_path(r, f));
        j["bridged_fronts"] = std::move(bridged);
        j["t_spread"] = opt(h.t_spread);
        j["hub_score"] = h.hub_score;
        list.push_back(std::move(j));
    }
    return list;
}

ordered_json regions_object(const KTReport& r) {
    ordered_json regions = ordered_json::array();
    for (const auto& region : r.hubs.regions) {
        ordered_json ids = ordered_json::array();
        for (auto i : region) ids.push_back(r.id_of(i));
        regions.push_back(std::move(ids));
    }
    return regions;
}

ordered_json main_path_object(const CitationNetwork& net, const MainPath& path) {
    ordered_json j;
    ordered_json nodes = ordered_json::array();
    for (auto i : path.nodes) nodes.push_back(net.doc(i).id);
    ordered_json spc = ordered_json::array();
    for (const auto& s : path.spc) spc.push_back(s.str());
    ordered_json removed = ordered_json::array();
    for (const auto& c : path.removed) removed.push_back({net.doc(c.citing).id, net.doc(c.cited).id});
    j["nodes"] = std::move(nodes);
    j["spc"] = std::move(spc);
    j["removed_citations"] = std::move(removed);
    return j;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string dot_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string report_json(const KTReport& r, bool with_timestamp) {
    ordered_json j;
    j["tool"] = {{"name", "ktmap"}, {"version", std::string(version())}};
    if (with_timestamp) j["generated_at"] = r.generated_at;
    j["config"] = config_json(r.config);
    j["execution"] = {{"threads", r.config.threads}};
    j["corpus"] = {{"nodes", r.corpus_nodes},
                   {"edges", r.corpus_edges},
                   {"selected_nodes", r.core.size()},
                   {"selected_edges", r.core.citations().size()},
                   {"analysis_nodes", r.graph.graph.node_count()},
                   {"analysis_edges", r.graph.graph.edge_count()}};
    j["power_law"] = r.power_law ? power_law_object(*r.power_law) : ordered_json(nullptr);
    if (!r.power_law_note.empty()) j["power_law_note"] = r.power_law_note;
    j["assortativity"] = opt(r.assortativity);
    if (!r.assortativity_note.empty()) j["assortativity_note"] = r.assortativity_note;
    j["scaling"] = r.scaling ? scaling_object(*r.scaling) : ordered_json(nullptr);
    if (!r.scaling_note.empty()) j["scaling_note"] = r.scaling_note;
    j["fronts"] = fronts_object(r);
    j["hubs"] = hubs_object(r);
    j["hub_regions"] = regions_object(r);
    j["hub_thresholds"] = {{"degree", r.hubs.degree_threshold}, {"c_max", r.hubs.c_max}};
    j["main_path"] = r.main_path ? main_path_object(r.core, *r.main_path) : ordered_json(nullptr);
    if (!r.main_path_note.empty()) j["main_path_note"] = r.main_path_note;
    j["warnings"] = r.warnings;
    return j.dump(2) + "\n";
}

std::string scores_csv(const CitationNetwork& net, std::span<const TranslationalProfile> profiles) {
    std::ostringstream out;
    out << "id,T,class\n";
    for (NodeIndex i = 0; i < net.size(); ++i)
        out << net.doc(i).id << ',' << fmt(profiles[i].score) << ',' << to_string(profiles[i].cls) << '\n';
    return out.str();
}

std::string fronts_csv(const KTReport& r) {
    std::ostringstream out;
    out << "id,front_path\n";
    for (NodeIndex i = 0; i < r.graph.origin.size(); ++i) out << r.id_of(i) << ',' << r.tree.path_of(i) << '\n';
    return out.str();
}

std::string fronts_json(const KTReport& r) { return fronts_object(r).dump(2) + "\n"; }

std::string metrics_csv(const KTReport& r) {
    std::ostringstream out;
    out << "id,k,c,P,z\n";
    for (NodeIndex i = 0; i < r.metrics.size(); ++i) {
        const auto& m = r.metrics[i];
        out << r.id_of(i) << ',' << m.degree << ',' << fmt(m.clustering) << ',' << fmt(m.participation) << ','
            << fmt(m.within_module_z) << '\n';
    }
    return out.str();
}

std::string scaling_json(const ScalingFit& fit) { return scaling_object(fit).dump(2) + "\n"; }

std::string power_law_json(const PowerLawFit& fit) { return power_law_object(fit).dump(2) + "\n"; }

std::string hubs_json(const KTReport& r) { return hubs_object(r).dump(2) + "\n"; }

std::string main_path_json(const CitationNetwork& net, const MainPath& path) {
    return main_path_object(net, path).dump(2) + "\n";
}

GraphFormat parse_graph_format(std::string_view name) {
    if (name == "graphml") return GraphFormat::GraphML;
    if (name == "dot") return GraphFormat::Dot;
    throw UsageError("unknown graph format '" + std::string(name) + "' (supported: graphml, dot)");
}

std::string export_graph(const KTReport& r, GraphFormat format) {
    const auto& net = r.core;
    std::vector<std::string> front(net.size());
    for (NodeIndex i = 0; i < r.graph.origin.size(); ++i) front[r.graph.origin[i]] = r.tree.path_of(i);
    std::set<NodeIndex> hubs;
    for (const auto& h : r.hubs.hubs) hubs.insert(r.graph.origin[h.node]);

    std::ostringstream out;
    if (format == GraphFormat::GraphML) {
        out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
            << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
            << "  <key id=\"front_path\" for=\"node\" attr.name=\"front_path\" attr.type=\"string\"/>\n"
            << "  <key id=\"T\" for=\"node\" attr.name=\"T\" attr.type=\"double\"/>\n"
            << "  <key id=\"class\" for=\"node\" attr.name=\"class\" attr.type=\"string\"/>\n"
            << "  <key id=\"hub\" for=\"node\" attr.name=\"hub\" attr.type=\"boolean\"/>\n"
            << "  <key id=\"year\" for=\"node\" attr.name=\"year\" attr.type=\"int\"/>\n"
            << "  <key id=\"kind\" for=\"node\" attr.name=\"kind\" attr.type=\"string\"/>\n"
            << "  <graph id=\"ktmap\" edgedefault=\"directed\">\n";
        for (NodeIndex i = 0; i < net.size(); ++i) {
            const auto& d = net.doc(i);
            out << "    <node id=\"" << xml_escape(d.id) << "\">";
            if (!front[i].empty()) out << "<data key=\"front_path\">" << xml_escape(front[i]) << "</data>";
            if (r.profiles[i].score) out << "<data key=\"T\">" << fmt(*r.profiles[i].score) << "</data>";
            out << "<data key=\"class\">" << to_string(r.profiles[i].cls) << "</data>"
                << "<data key=\"hub\">" << (hubs.contains(i) ? "true" : "false") << "</data>";
            if (d.year) out << "<data key=\"year\">" << *d.year << "</data>";
            out << "<data key=\"kind\">" << to_string(d.kind) << "</data></node>\n";
        }
        for (const auto& c : net.citations())
            out << "    <edge source=\"" << xml_escape(net.doc(c.citing).id) << "\" target=\""
                << xml_escape(net.doc(c.cited).id) << "\"/>\n";
        out << "  </graph>\n</graphml>\n";
    } else {
        out << "digraph ktmap {\n";
        for (NodeIndex i = 0; i < net.size(); ++i) {
            const auto& d = net.doc(i);
            out << "  " << dot_quote(d.id) << " [front_path=" << dot_quote(front[i]);
            if (r.profiles[i].score) out << ", T=" << fmt(*r.profiles[i].score);
            out << ", class=" << dot_quote(to_string(r.profiles[i].cls))
                << ", hub=" << (hubs.contains(i) ? "true" : "false");
            if (hubs.contains(i)) out << ", shape=doublecircle";
            out << "];\n";
        }
        for (const auto& c : net.citations())
            out << "  " << dot_quote(net.doc(c.citing).id) << " -> " << dot_quote(net.doc(c.cited).id) << ";\n";
        out << "}\n";
    }
    return out.str();
}

} // namespace ktmap
