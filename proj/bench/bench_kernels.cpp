// Serial vs OpenMP timings for the data-parallel kernels.
//   bench_kernels [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>

#include "sparsify/kernels.hpp"
#include "sparsify/spanning_tree.hpp"

using namespace sparsify;

static double best_of(int repeats, const std::function<void()>& f) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

static void row(const char* name, double serial, double parallel) {
    std::printf("%-22s serial %9.4f s   omp %9.4f s   speedup %5.2fx\n", name, serial, parallel, serial / parallel);
}

int main(int argc, char** argv) {
    const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal;

    {
        const int d = 200, m = 4000;
        Matrix a = Matrix::NullaryExpr(d, d, [&] { return normal(rng); });
        const Matrix sym = a * a.transpose();
        const Matrix cols = Matrix::NullaryExpr(d, m, [&] { return normal(rng); });
        Vector sink;
        const double s = best_of(repeats, [&] { sink = kernels::quadratic_forms_serial(sym, cols); });
        const double p = best_of(repeats, [&] { sink = kernels::quadratic_forms_parallel(sym, cols); });
        row("quadratic_forms", s, p);
    }
    {
        const int n = 12, m = 14;
        std::vector<Edge> base;
        for (int i = 0; i + 1 < n; ++i) base.push_back({i, i + 1, 1.0});
        std::vector<Edge> cand;
        std::uniform_int_distribution<int> vertex(0, n - 1);
        WeightedGraph bg(n, base);
        while (static_cast<int>(cand.size()) < m) {
            int u = vertex(rng), v = vertex(rng);
            if (u == v || bg.has_edge(u, v)) continue;
            if (u > v) std::swap(u, v);
            bool dup = false;
            for (const auto& e : cand) dup = dup || (e.u == u && e.v == v);
            if (!dup) cand.push_back({u, v, 1.0});
        }
        const Matrix lb = laplacian(bg);
        const auto subsets = kernels::enumerate_subsets(m, 4);
        std::vector<double> sink;
        const double s = best_of(repeats, [&] { sink = kernels::subset_connectivity_serial(lb, cand, subsets); });
        const double p = best_of(repeats, [&] { sink = kernels::subset_connectivity_parallel(lb, cand, subsets); });
        row("subset_connectivity", s, p);
    }
    {
        const int n = 400;
        std::vector<Edge> edges;
        std::uniform_real_distribution<double> weight(0.5, 2.0);
        for (int i = 0; i < n; ++i) {
            edges.push_back({i, (i + 1) % n, weight(rng)});
            edges.push_back({i, (i + 7) % n, weight(rng)});
            edges.push_back({i, (i * 13 + 5) % n == i ? (i + 2) % n : (i * 13 + 5) % n, weight(rng)});
        }
        const WeightedGraph g(n, edges);
        const auto trees = stretch_tree_candidates(g, 1);
        std::vector<double> sink;
        const double s = best_of(repeats, [&] { sink = candidate_stretches(g, trees, Execution::Serial); });
        const double p = best_of(repeats, [&] { sink = candidate_stretches(g, trees, Execution::Parallel); });
        row("tree_stretch", s, p);
    }
}
