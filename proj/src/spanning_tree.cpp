#include "sparsify/spanning_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <string>

#include "sparsify/errors.hpp"

namespace sparsify {

SpanningTree::SpanningTree(int n, const std::vector<Edge>& edges) {
    if (n <= 0) throw InvalidGraph("spanning tree needs at least one vertex");
    if (static_cast<int>(edges.size()) != n - 1) {
        throw InvalidGraph("spanning tree on " + std::to_string(n) + " vertices needs " + std::to_string(n - 1) +
                           " edges, got " + std::to_string(edges.size()));
    }
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (const auto& e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n || e.u == e.v || !(e.w > 0.0)) {
            throw InvalidGraph("spanning tree: invalid edge");
        }
        adj[e.u].emplace_back(e.v, e.w);
        adj[e.v].emplace_back(e.u, e.w);
    }
    parent_.assign(n, -1);
    parent_weight_.assign(n, 0.0);
    depth_.assign(n, 0);
    resistance_.assign(n, 0.0);
    std::vector<char> seen(n, 0);
    std::vector<int> order{0};
    seen[0] = 1;
    for (std::size_t head = 0; head < order.size(); ++head) {
        const int x = order[head];
        for (auto [y, w] : adj[x]) {
            if (seen[y]) continue;
            seen[y] = 1;
            parent_[y] = x;
            parent_weight_[y] = w;
            depth_[y] = depth_[x] + 1;
            resistance_[y] = resistance_[x] + 1.0 / w;
            order.push_back(y);
        }
    }
    if (static_cast<int>(order.size()) != n) throw InvalidGraph("spanning tree: edges do not connect all vertices");

    int levels = 1;
    while ((1 << levels) < n) ++levels;
    up_.assign(levels, std::vector<int>(n, 0));
    for (int v = 0; v < n; ++v) up_[0][v] = parent_[v] < 0 ? v : parent_[v];
    for (int j = 1; j < levels; ++j) {
        for (int v = 0; v < n; ++v) up_[j][v] = up_[j - 1][up_[j - 1][v]];
    }
}

int SpanningTree::lca(int u, int v) const {
    if (depth_[u] < depth_[v]) std::swap(u, v);
    int diff = depth_[u] - depth_[v];
    for (int j = 0; diff > 0; ++j, diff >>= 1) {
        if (diff & 1) u = up_[j][u];
    }
    if (u == v) return u;
    for (int j = static_cast<int>(up_.size()) - 1; j >= 0; --j) {
        if (up_[j][u] != up_[j][v]) {
            u = up_[j][u];
            v = up_[j][v];
        }
    }
    return parent_[u];
}

double SpanningTree::path_resistance(int u, int v) const {
    return resistance_[u] + resistance_[v] - 2.0 * resistance_[lca(u, v)];
}

WeightedGraph SpanningTree::as_graph() const {
    std::vector<Edge> edges;
    for (int v = 0; v < num_vertices(); ++v) {
        if (parent_[v] >= 0) edges.push_back({parent_[v], v, parent_weight_[v]});
    }
    return WeightedGraph(num_vertices(), std::move(edges));
}

SpanningTree shortest_path_tree(const WeightedGraph& g, int root) {
    const int n = g.num_vertices();
    const auto adj = g.adjacency();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> via(n, -1);
    std::vector<double> via_w(n, 0.0);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[root] = 0.0;
    pq.emplace(0.0, root);
    while (!pq.empty()) {
        auto [d, x] = pq.top();
        pq.pop();
        if (d > dist[x]) continue;
        for (auto [y, w] : adj[x]) {
            const double nd = d + 1.0 / w;
            if (nd < dist[y]) {
                dist[y] = nd;
                via[y] = x;
                via_w[y] = w;
                pq.emplace(nd, y);
            }
        }
    }
    std::vector<Edge> edges;
    for (int v = 0; v < n; ++v) {
        if (v == root) continue;
        if (via[v] < 0) throw DisconnectedGraph("shortest_path_tree: graph is not connected");
        edges.push_back({via[v], v, via_w[v]});
    }
    return SpanningTree(n, edges);
}

SpanningTree max_weight_spanning_tree(const WeightedGraph& g) {
    const int n = g.num_vertices();
    std::vector<Edge> sorted = g.edges();
    std::stable_sort(sorted.begin(), sorted.end(), [](const Edge& a, const Edge& b) { return a.w > b.w; });
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<Edge> edges;
    for (const auto& e : sorted) {
        const int a = find(e.u), b = find(e.v);
        if (a == b) continue;
        parent[a] = b;
        edges.push_back(e);
    }
    if (static_cast<int>(edges.size()) != n - 1) throw DisconnectedGraph("max_weight_spanning_tree: graph is not connected");
    return SpanningTree(n, edges);
}

StretchReport tree_stretch(const WeightedGraph& g, const SpanningTree& t) {
    if (g.num_vertices() != t.num_vertices()) {
        throw InvalidGraph("tree_stretch: edge endpoints outside the tree (" + std::to_string(g.num_vertices()) +
                           " vs " + std::to_string(t.num_vertices()) + " vertices)");
    }
    StretchReport r;
    r.per_edge.reserve(g.num_edges());
    for (const auto& e : g.edges()) {
        const double st = e.w * t.path_resistance(e.u, e.v);
        r.per_edge.push_back(st);
        r.total += st;
    }
    return r;
}

std::vector<SpanningTree> stretch_tree_candidates(const WeightedGraph& g, std::uint64_t seed) {
    const int n = g.num_vertices();
    if (!g.is_connected()) throw DisconnectedGraph("low-stretch tree: graph is not connected");
    std::vector<int> roots(n);
    std::iota(roots.begin(), roots.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(roots.begin(), roots.end(), rng);
    roots.resize(std::min(n, 16));
    std::vector<SpanningTree> out;
    out.reserve(roots.size() + 1);
    for (int r : roots) out.push_back(shortest_path_tree(g, r));
    out.push_back(max_weight_spanning_tree(g));
    return out;
}

std::vector<double> candidate_stretches(const WeightedGraph& g, const std::vector<SpanningTree>& trees,
                                        Execution exec) {
    const long long count = static_cast<long long>(trees.size());
    std::vector<double> out(trees.size());
    if (exec == Execution::Serial) {
        for (long long i = 0; i < count; ++i) out[i] = tree_stretch(g, trees[i]).total;
        return out;
    }
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < count; ++i) out[i] = tree_stretch(g, trees[i]).total;
    return out;
}

SpanningTree low_stretch_tree(const WeightedGraph& g, std::uint64_t seed, Execution exec) {
    if (g.num_vertices() == 0) throw InvalidGraph("low_stretch_tree: empty graph");
    auto trees = stretch_tree_candidates(g, seed);
    const auto scores = candidate_stretches(g, trees, exec);
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] < scores[best]) best = i;
    }
    return std::move(trees[best]);
}

TraceCheck sw_trace_check(const WeightedGraph& g, const SpanningTree& t, const std::vector<double>& probes) {
    TraceCheck c;
    c.stretch = tree_stretch(g, t).total;
    const Vector ev = pencil_eigenvalues(laplacian(g), laplacian(t.as_graph()));
    c.trace = ev.sum();
    c.residual = std::abs(c.trace - c.stretch);
    for (double p : probes) {
        EigenTail tail{p, static_cast<int>((ev.array() > p).count()), c.stretch / p};
        if (tail.count > tail.bound) c.tail_ok = false;
        c.tail.push_back(tail);
    }
    return c;
}

}  // namespace sparsify
