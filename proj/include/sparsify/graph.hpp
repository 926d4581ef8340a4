#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "sparsify/linalg.hpp"

namespace sparsify {

struct Edge {
    int u = 0;
    int v = 0;
    double w = 1.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected graph with positive edge weights. Edges are stored with u < v,
/// sorted, and parallel edges are merged by adding their weights.
class WeightedGraph {
public:
    WeightedGraph() = default;
    /// Throws InvalidGraph on out-of-range endpoints, self-loops or w ≤ 0.
    WeightedGraph(int n, std::vector<Edge> edges);

    int num_vertices() const { return n_; }
    std::size_t num_edges() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }

    double total_weight() const;
    /// Weight of edge {u, v}, or 0 when absent.
    double weight(int u, int v) const;
    bool has_edge(int u, int v) const { return weight(u, v) > 0.0; }

    WeightedGraph scaled(double factor) const;
    std::vector<double> weighted_degrees() const;
    int max_degree() const;
    double max_weighted_degree() const;

    /// Component label per vertex, labels 0..count-1 in order of first vertex.
    struct Components {
        std::vector<int> label;
        int count = 0;
    };
    Components components() const;
    bool is_connected() const;

    std::vector<std::vector<std::pair<int, double>>> adjacency() const;

    /// Union of two graphs on the same vertex set; shared pairs add weights.
    friend WeightedGraph operator+(const WeightedGraph& a, const WeightedGraph& b);
    friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;

private:
    int n_ = 0;
    std::vector<Edge> edges_;
};

/// L(i,i) = weighted degree, L(i,j) = −w_ij.
Matrix laplacian(const WeightedGraph& g);
/// Signed incidence vector e_u − e_v of length n.
Vector incidence(int n, int u, int v);

}  // namespace sparsify
