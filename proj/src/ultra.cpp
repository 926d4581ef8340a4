#include "sparsify/ultra.hpp"

#include <string>

#include "sparsify/errors.hpp"

namespace sparsify {

UltraResult build_ultrasparsifier(const WeightedGraph& g, const UltraOptions& opts) {
    if (opts.k < 1) throw InvalidK("ultrasparsifier: k must be at least 1");
    if (!(opts.c1 > 0.0) || !(opts.c3 > 0.0)) throw PreconditionError("ultrasparsifier: c1 and c3 must be positive");
    if (g.num_vertices() < 2 || !g.is_connected()) {
        throw DisconnectedGraph("ultrasparsifier: input graph must be connected with at least two vertices");
    }
    const int n = g.num_vertices();

    UltraResult r;
    r.c1 = opts.c1;
    r.c3 = opts.c3;
    r.budget = default_patch_budget(opts.k);
    r.tree = low_stretch_tree(g, opts.seed, opts.exec);
    r.stretch = sw_trace_check(g, r.tree);
    r.kappa_target = opts.c1 * r.stretch.stretch / opts.k;

    if (static_cast<int>(g.num_edges()) == n - 1) {
        r.tree_input = true;
        r.u = g;
        r.measured = {1.0, 1.0};
        r.measured_kappa = 1.0;
        return r;
    }

    const WeightedGraph t = r.tree.as_graph();
    const WeightedGraph w = g.scaled(1.0 / (opts.c3 * r.kappa_target));
    r.patch_params = verify_patch(t, w, std::min(opts.k, n - 2));
    r.patch = sparsify_patch(t, w, opts.k, r.budget, opts.exec);
    r.u = t + r.patch.wk;

    r.measured = pencil_range(laplacian(g), laplacian(r.u));
    r.measured_kappa = r.measured.condition_number();
    r.certified_lower = 1.0 / (r.patch.certified_upper * (1.0 + 1.0 / (opts.c3 * r.kappa_target)));
    r.certified_upper = opts.c3 * r.kappa_target / r.patch.certified_lower;
    return r;
}

}  // namespace sparsify
