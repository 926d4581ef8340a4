#pragma once

#include <cstdint>

#include "sparsify/patch.hpp"
#include "sparsify/spanning_tree.hpp"

namespace sparsify {

struct UltraOptions {
    int k = 1;
    double c1 = 4.0;
    double c3 = 1.0;
    std::uint64_t seed = 1;
    Execution exec = Execution::Parallel;
};

/// Tree plus a patch sparsifier of the scaled graph W = G/(c₃κ), with the
/// measured spectral relation between G and the result.
struct UltraResult {
    WeightedGraph u;
    SpanningTree tree;
    TraceCheck stretch;       ///< st_T(G), the trace identity and eigenvalue tail
    double kappa_target = 1;  ///< c₁·st_T(G)/k
    int budget = 0;           ///< N = 8k + 1
    double c1 = 0;
    double c3 = 0;
    bool tree_input = false;  ///< G was already a tree, so U = G
    PatchParams patch_params; ///< verify_patch(T, W, k)
    PatchSparsifier patch;
    /// c·L_U ⪯ L_G ⪯ κ'·L_U: generalized eigenvalues of (L_G, L_U).
    PencilRange measured;
    double measured_kappa = 1;  ///< κ(L_G, L_U)
    /// 1/(c₂(1 + 1/(c₃κ))) with c₂ the patch's certified upper constant.
    double certified_lower = 1;
    /// c₃κ/(certified patch lower constant).
    double certified_upper = 1;

    std::size_t edge_count() const { return u.num_edges(); }
};

/// Throws DisconnectedGraph for a disconnected G and InvalidK for k < 1.
UltraResult build_ultrasparsifier(const WeightedGraph& g, const UltraOptions& opts);

}  // namespace sparsify
