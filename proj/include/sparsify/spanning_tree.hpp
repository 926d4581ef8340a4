#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "sparsify/graph.hpp"
#include "sparsify/kernels.hpp"

namespace sparsify {

/// Spanning tree rooted at vertex 0 with binary-lifting ancestor tables and
/// root-path resistances S(x) = Σ 1/w along the path from the root.
class SpanningTree {
public:
    SpanningTree() = default;
    /// Throws InvalidGraph unless `edges` form a spanning tree on n vertices.
    SpanningTree(int n, const std::vector<Edge>& edges);

    int num_vertices() const { return static_cast<int>(parent_.size()); }
    int parent(int v) const { return parent_[v]; }
    double parent_weight(int v) const { return parent_weight_[v]; }
    int depth(int v) const { return depth_[v]; }
    double root_resistance(int v) const { return resistance_[v]; }

    int lca(int u, int v) const;
    /// Σ 1/w over the tree path between u and v.
    double path_resistance(int u, int v) const;

    WeightedGraph as_graph() const;

private:
    std::vector<int> parent_;
    std::vector<double> parent_weight_;
    std::vector<int> depth_;
    std::vector<double> resistance_;
    std::vector<std::vector<int>> up_;
};

/// Shortest-path tree from `root` with edge lengths 1/w.
SpanningTree shortest_path_tree(const WeightedGraph& g, int root);
/// Maximum-weight spanning tree (Kruskal, ties by edge order).
SpanningTree max_weight_spanning_tree(const WeightedGraph& g);

struct EigenTail {
    double threshold = 0;
    int count = 0;       ///< eigenvalues above the threshold
    double bound = 0;    ///< st_T(G)/threshold
};

struct StretchReport {
    std::vector<double> per_edge;  ///< aligned with g.edges()
    double total = 0;
    double sw_trace = std::numeric_limits<double>::quiet_NaN();  ///< Tr(L_G L_T†)
    std::vector<EigenTail> tail;
};

/// st_T(e) = w(e)·(S(u) + S(v) − 2S(lca(u,v))). Throws InvalidGraph when the
/// tree and the graph have different vertex counts.
StretchReport tree_stretch(const WeightedGraph& g, const SpanningTree& t);

/// Candidate trees: shortest-path trees from min(n, 16) distinct random
/// roots (seeded) followed by the maximum-weight spanning tree.
std::vector<SpanningTree> stretch_tree_candidates(const WeightedGraph& g, std::uint64_t seed);

/// Total stretch of every candidate, in candidate order.
std::vector<double> candidate_stretches(const WeightedGraph& g, const std::vector<SpanningTree>& trees,
                                        Execution exec = Execution::Parallel);

/// Candidate with the smallest total stretch, lowest index on ties.
/// Throws DisconnectedGraph when g is not connected.
SpanningTree low_stretch_tree(const WeightedGraph& g, std::uint64_t seed = 1, Execution exec = Execution::Parallel);

struct TraceCheck {
    double trace = 0;    ///< Tr((L_T†)^{1/2} L_G (L_T†)^{1/2})
    double stretch = 0;  ///< st_T(G)
    double residual = 0; ///< |trace − stretch|
    std::vector<EigenTail> tail;
    bool tail_ok = true;
};

/// Compares the trace of the relative spectrum with the total stretch and
/// counts eigenvalues above each probe threshold.
TraceCheck sw_trace_check(const WeightedGraph& g, const SpanningTree& t,
                          const std::vector<double>& probes = {1.0, 2.0, 5.0, 10.0});

}  // namespace sparsify
