#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypent/common.hpp"

namespace hypent {

enum class GraphKind { BinaryTree, PrunedTree, Grid, FreeCayley, Explicit };

std::string to_string(GraphKind k);

// Graph of a pants decomposition. Built-in kinds are implicit and windowed:
// vertices past the window are not materialised, and edges leaving the window
// are kept as "stubs" so that boundaries of subgraphs inside the window are
// the same as in the infinite graph.
class PantsGraph {
public:
    using Vertex = std::uint64_t;

    // Rooted binary tree with a funnel at the root; heap numbering, root 1,
    // children 2v and 2v + 1, window = depths 0..depth.
    static PantsGraph binary_tree(int depth, double ell);
    // Binary tree with, below every surviving even-depth vertex, one of its
    // four depth-2 descendants removed (the one reached by two right turns)
    // together with its subtree. The cut boundary carries a funnel.
    static PantsGraph pruned_tree(int depth, double ell);
    // Box {0..side-1}^dim of Z^dim.
    static PantsGraph grid(int side, int dim, double ell);
    // 2k-regular tree, BFS numbering from root 0, window = depths 0..depth.
    static PantsGraph free_cayley(int k, int depth, double ell);
    // Vertices 0..n-1, undirected multi-edges (u == v is a loop), funnels as a
    // list of vertices (repeats allowed).
    static PantsGraph from_edges(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges,
                                 const std::vector<Vertex>& funnels, double ell, int max_valency = 3);

    GraphKind kind() const { return kind_; }
    double ell() const { return ell_; }
    int max_valency() const { return max_valency_; }
    Vertex root() const;
    bool contains(Vertex v) const;
    std::uint64_t vertex_count() const;
    // Neighbour entries with multiplicity; a loop appears twice.
    void neighbours(Vertex v, std::vector<Vertex>& out) const;
    int funnels(Vertex v) const;
    // Edges from v to vertices outside the window.
    int stubs(Vertex v) const;
    int depth_of(Vertex v) const;  // tree kinds only
    // Materialised vertices at the given tree depth.
    std::uint64_t count_at_depth(int depth) const;

    // Throws InvalidSpecError unless the window is connected and every vertex
    // has valency at most max_valency (edges, stubs and funnels).
    void validate() const;

private:
    GraphKind kind_ = GraphKind::Explicit;
    double ell_ = 1;
    int max_valency_ = 3;
    int depth_ = 0;
    int side_ = 0, dim_ = 0, k_ = 0;
    std::vector<std::uint64_t> level_start_;  // free Cayley
    std::vector<std::uint64_t> offsets_;      // explicit CSR
    std::vector<Vertex> targets_;
    std::vector<int> funnel_count_;
};

// Boundary of K: members adjacent to a vertex outside K (stubs count).
std::vector<PantsGraph::Vertex> boundary_by_adjacency(const PantsGraph& g, const std::vector<PantsGraph::Vertex>& K);
// Same set, found by scanning the complement side: every neighbour of K not in
// K marks its neighbours in K. Used as a cross-check.
std::vector<PantsGraph::Vertex> boundary_by_complement(const PantsGraph& g, const std::vector<PantsGraph::Vertex>& K);
// Curves of length ell bounding the union of pants in K: edges and stubs to
// the complement plus funnels in K. Loops contribute nothing.
std::uint64_t boundary_edge_count(const PantsGraph& g, const std::vector<PantsGraph::Vertex>& K);
bool is_connected_subset(const PantsGraph& g, const std::vector<PantsGraph::Vertex>& K);

enum class AmenabilityTrend { Amenable, Nonamenable, Inconclusive };
std::string to_string(AmenabilityTrend t);

struct IsoOptions {
    int m_exact = 12;
    std::uint64_t m_heur = 4096;
    double threshold = 0.05;
    std::uint64_t budget = 0;  // enumeration nodes; 0: HYPENT_ISO_BUDGET or 2e8
};

struct IsoProfile {
    PantsGraph::Vertex root = 0;
    int exact_up_to = 0;
    bool partial = false;
    // phi(m) for m = 1..exact_up_to: min |dK|/|K| over connected K containing
    // the root with |K| <= m.
    std::vector<double> exact;
    std::vector<std::uint64_t> enumerated;  // connected sets of each size
    // Upper bounds from balls and greedy accretion: (m, running min ratio).
    std::vector<std::pair<std::uint64_t, double>> heuristic;
    double final_ratio = 1;  // heuristic bound at the largest size reached
    double min_ratio = 1;    // smallest ratio seen anywhere
    AmenabilityTrend verdict = AmenabilityTrend::Inconclusive;
    // Largest |K| / boundary_edge_count(K) over every searched K.
    double best_area_ratio = 0;
    std::uint64_t best_area_size = 0;
};

IsoProfile iso_profile(const PantsGraph& g, PantsGraph::Vertex root, const IsoOptions& opts = {});

struct HPEstimate {
    double value = 0;  // 2 pi sup |K| / (ell boundary_edge_count(K))
    std::uint64_t best_size = 0;
    int exact_up_to = 0;
    bool unbounded = false;  // some searched K has no boundary at all
};

HPEstimate hP_estimate(const PantsGraph& g, const IsoOptions& opts = {});

struct SpectralChain {
    double hP = 0, b = 0, B = 0;
    double h_low = 0, h_high = 0;
    double lambda0_low = 0, lambda0_high = 0;
    double delta_low = 0, delta_high = 0;
};

SpectralChain spectral_chain(double hP, double b = 2, double B = 10);

// Distance from the centre of the right-angled hexagon with alternate sides
// ell/2 to the midpoint of one of those sides, and between two such midpoints.
double hexagon_r(double ell);
double hexagon_d(double ell);

enum class GapExample { Panty, Pruned };
std::string to_string(GapExample e);

struct GapOptions {
    double b = 2, B = 10;
    int tree_depth = 16;
    IsoOptions iso{12, 4096, 0.05, 0};
};

struct GapRow {
    double ell = 0;
    double Delta_low = 0;
    double hP = 0;
    double delta_high = 0;
    double gap = 0;
};

GapRow gap_bounds(GapExample example, double ell, const GapOptions& opts = {});

struct GapScan {
    std::vector<GapRow> rows;
    std::optional<double> first_positive;  // smallest ell on the grid with gap > 0
};

GapScan gap_scan(GapExample example, const std::vector<double>& ell_grid, const GapOptions& opts = {});

}  // namespace hypent
