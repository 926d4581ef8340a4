#include "sparsify/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "sparsify/errors.hpp"

namespace sparsify {

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges) : n_(n) {
    if (n < 0) throw InvalidGraph("negative vertex count");
    for (auto& e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
            throw InvalidGraph("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                               ") has an endpoint outside [0," + std::to_string(n) + ")");
        }
        if (e.u == e.v) throw InvalidGraph("self-loop at vertex " + std::to_string(e.u));
        if (!(e.w > 0.0)) {
            throw InvalidGraph("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                               ") has non-positive weight");
        }
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    for (const auto& e : edges) {
        if (!edges_.empty() && edges_.back().u == e.u && edges_.back().v == e.v) {
            edges_.back().w += e.w;
        } else {
            edges_.push_back(e);
        }
    }
}

double WeightedGraph::total_weight() const {
    double s = 0.0;
    for (const auto& e : edges_) s += e.w;
    return s;
}

double WeightedGraph::weight(int u, int v) const {
    if (u > v) std::swap(u, v);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair(u, v),
                               [](const Edge& e, const std::pair<int, int>& key) {
                                   return std::pair(e.u, e.v) < key;
                               });
    if (it != edges_.end() && it->u == u && it->v == v) return it->w;
    return 0.0;
}

WeightedGraph WeightedGraph::scaled(double factor) const {
    auto edges = edges_;
    for (auto& e : edges) e.w *= factor;
    return WeightedGraph(n_, std::move(edges));
}

std::vector<double> WeightedGraph::weighted_degrees() const {
    std::vector<double> deg(n_, 0.0);
    for (const auto& e : edges_) {
        deg[e.u] += e.w;
        deg[e.v] += e.w;
    }
    return deg;
}

int WeightedGraph::max_degree() const {
    std::vector<int> deg(n_, 0);
    for (const auto& e : edges_) {
        ++deg[e.u];
        ++deg[e.v];
    }
    return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

double WeightedGraph::max_weighted_degree() const {
    auto deg = weighted_degrees();
    return deg.empty() ? 0.0 : *std::max_element(deg.begin(), deg.end());
}

WeightedGraph::Components WeightedGraph::components() const {
    std::vector<int> parent(n_);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : edges_) {
        int a = find(e.u), b = find(e.v);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    Components c;
    c.label.assign(n_, -1);
    std::vector<int> root_label(n_, -1);
    for (int v = 0; v < n_; ++v) {
        int r = find(v);
        if (root_label[r] < 0) root_label[r] = c.count++;
        c.label[v] = root_label[r];
    }
    return c;
}

bool WeightedGraph::is_connected() const { return n_ <= 1 || components().count == 1; }

std::vector<std::vector<std::pair<int, double>>> WeightedGraph::adjacency() const {
    std::vector<std::vector<std::pair<int, double>>> adj(n_);
    for (const auto& e : edges_) {
        adj[e.u].emplace_back(e.v, e.w);
        adj[e.v].emplace_back(e.u, e.w);
    }
    return adj;
}

WeightedGraph operator+(const WeightedGraph& a, const WeightedGraph& b) {
    if (a.n_ != b.n_) throw InvalidGraph("graph union: vertex counts differ");
    auto edges = a.edges_;
    edges.insert(edges.end(), b.edges_.begin(), b.edges_.end());
    return WeightedGraph(a.n_, std::move(edges));
}

Matrix laplacian(const WeightedGraph& g) {
    const int n = g.num_vertices();
    Matrix l = Matrix::Zero(n, n);
    for (const auto& e : g.edges()) {
        l(e.u, e.u) += e.w;
        l(e.v, e.v) += e.w;
        l(e.u, e.v) -= e.w;
        l(e.v, e.u) -= e.w;
    }
    return l;
}

Vector incidence(int n, int u, int v) {
    Vector b = Vector::Zero(n);
    b(u) = 1.0;
    b(v) = -1.0;
    return b;
}

}  // namespace sparsify
