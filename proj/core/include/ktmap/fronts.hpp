#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ktmap/graph.hpp"

namespace ktmap {

/// Assignment of every node to exactly one front, with its modularity.
struct Partition {
    /// Dense labels numbered by first appearance (the front holding node 0 is 0).
    std::vector<std::size_t> labels;
    double q = 0.0;

    std::size_t front_count() const;
    /// Member lists per label, each ascending.
    std::vector<std::vector<NodeIndex>> members() const;
};

/// Relabels to dense ids in order of first appearance.
std::vector<std::size_t> normalize_labels(std::span<const std::size_t> labels);

/// Newman modularity Q = sum_s (e_ss - a_s^2) with edge weights. Throws
/// DataError for a graph without edges and UsageError on a size mismatch.
double modularity(const Graph& graph, std::span<const std::size_t> labels);

enum class Refinement { None, VertexMoves, KernighanLin };

/// Local moving: nodes are visited in index order and each moves to the
/// neighbouring front with the largest positive modularity gain, until a full
/// sweep moves nothing. Never lowers Q. Labels come back dense.
std::vector<std::size_t> refine_by_moves(const Graph& graph, std::span<const std::size_t> labels,
                                         std::size_t max_sweeps = 100);

/// Kernighan-Lin passes: within a pass every node moves once, each step
/// taking the best remaining move (to a neighbouring front or a fresh one) even
/// when it lowers Q, and the best prefix of the pass is kept. Passes repeat
/// while they improve Q; a pass gives up after `patience` steps without a new
/// best. Never lowers Q. Labels come back dense.
std::vector<std::size_t> refine_kernighan_lin(const Graph& graph, std::span<const std::size_t> labels,
                                              std::size_t patience = 64, std::size_t max_passes = 100);

/// Greedy agglomeration from singletons, always merging the adjacent pair with
/// the largest modularity gain; the dendrogram cut with maximal Q is returned.
/// Ties go to the lexicographically smallest (front_a, front_b) pair, so the
/// result is fully deterministic. Isolated nodes stay singletons. With
/// VertexMoves the best cut is then polished by refine_by_moves. With
/// KernighanLin the five cuts nearest the best one are each polished by
/// refine_kernighan_lin and the highest Q wins, ties going to the cut nearest
/// the best one.
Partition fast_greedy(const Graph& graph, Refinement refinement = Refinement::KernighanLin);

struct HierarchyOptions {
    /// Deepest level, counting the whole corpus as level 1.
    std::size_t max_depth = 4;
    std::size_t min_front_size = 10;
    double min_q_gain = 0.05;
    unsigned threads = 1;
    Refinement refinement = Refinement::KernighanLin;
};

struct Front {
    /// Dotted path such as "2.1.3": level-2 index, then indices within each parent (1-based).
    /// The root (whole corpus, level 1) has an empty path.
    std::string path;
    std::size_t level = 1;
    std::optional<std::size_t> parent;
    std::vector<std::size_t> children;
    /// Ascending node indices.
    std::vector<NodeIndex> members;
    /// Modularity of this front's own split into children, measured on its induced subgraph.
    std::optional<double> split_q;
};

/// Nested fronts; every level refines the one above and the leaves partition the nodes.
class FrontTree {
public:
    FrontTree() = default;
    FrontTree(std::vector<Front> fronts, std::size_t node_count);

    /// fronts()[0] is the root.
    std::span<const Front> fronts() const { return fronts_; }
    std::size_t node_count() const { return leaf_of_.size(); }
    /// Deepest level that holds a front (2 for a flat partition).
    std::size_t depth() const { return depth_; }

    /// Index into fronts() of the leaf holding node i.
    std::size_t leaf_of(NodeIndex i) const { return leaf_of_.at(i); }
    const std::string& path_of(NodeIndex i) const { return fronts_[leaf_of(i)].path; }

    /// Front index holding node i at `level`, or its leaf when the branch stops earlier.
    std::size_t front_at(NodeIndex i, std::size_t level) const;

    /// Dense labels of the partition at `level` (>= 2), carrying leaves down.
    std::vector<std::size_t> level_labels(std::size_t level) const;

    /// Front indices at exactly `level`.
    std::vector<std::size_t> fronts_at(std::size_t level) const;

private:
    std::vector<Front> fronts_;
    std::vector<std::size_t> leaf_of_;
    std::size_t depth_ = 1;
};

/// Level 2 is fast_greedy on the whole graph; each front with at least
/// min_front_size members is re-clustered on its induced subgraph until
/// max_depth, or until the split has fewer than two fronts or Q < min_q_gain.
FrontTree hierarchical_fronts(const Graph& graph, const HierarchyOptions& options = {});

} // namespace ktmap
