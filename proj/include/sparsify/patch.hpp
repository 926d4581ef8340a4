#pragma once

#include <vector>

#include "sparsify/barrier_engine.hpp"
#include "sparsify/graph.hpp"

namespace sparsify {

/// Measured patch parameters of W with respect to G: λ_{k+1} of
/// (L_{G+W}†)^{1/2} L_G (L_{G+W}†)^{1/2} on im(L_{G+W}) and Tr(L_W L_{G+W}†).
struct PatchParams {
    int k = 0;
    double trace_bound = 0;  ///< Tr(L_W L_{G+W}†)
    double lambda_star = 0;  ///< λ_{k+1}
    int dim = 0;             ///< rank of L_{G+W}
};

/// Throws InvalidK when k ≥ rank(L_{G+W}).
PatchParams verify_patch(const WeightedGraph& g, const WeightedGraph& w, int k);

/// Engine instance for (G, W) expressed in an orthonormal basis Q of
/// V = im(L_{G+W}): X = Λ^{-1/2}QᵀL_GQΛ^{-1/2}, vₑ = √wₑ Λ^{-1/2}Qᵀbₑ,
/// costₑ = wₑ/Σw and M* = I.
struct PatchProblem {
    EngineProblem engine;
    std::vector<Edge> w_edges;  ///< edge e ↔ update column e
};
PatchProblem build_patch_problem(const WeightedGraph& g, const WeightedGraph& w, int k, int budget);

/// One connected component of G+W that carried W edges.
struct PatchComponent {
    std::vector<int> vertices;
    int k = 0;
    int budget = 0;
    int trace_bound = 0;
    double lambda_star = 0;
    double certified_lower = 0;           ///< min(N/T,1)·λ*/72
    double analytic_lower = 0;             ///< engine bound with the exact θ expression
    double theta_max = 0;
    double w_total = 0;
    double wk_total = 0;
    int support = 0;
    int monotonicity_violations = 0;
    std::vector<StepTrace> trace;
};

struct PatchSparsifier {
    WeightedGraph wk;
    double certified_lower = 1.0;  ///< c₁·min(N/T,1)·λ* with c₁ = 1/72, minimum over components
    double certified_upper = 1.0;  ///< 5, or 1 when W is empty
    double analytic_lower = 1.0;
    double measured_lower = 1.0;   ///< generalized eigenvalues of (L_{G+W_k}, L_{G+W})
    double measured_upper = 1.0;
    double total_weight = 0;
    double weight_budget = 0;      ///< Σ over components of min(1, N/T)·Σwₑ
    std::vector<PatchComponent> components;
};

/// Reweighted subgraph W_k ⊆ W with at most N edges per component such that
/// G+W_k spectrally sandwiches G+W. Throws BudgetTooSmall when N ≤ 8k.
PatchSparsifier sparsify_patch(const WeightedGraph& g, const WeightedGraph& w, int k, int budget,
                               Execution exec = Execution::Parallel);

/// 8k + 1, the smallest budget the engine accepts.
inline int default_patch_budget(int k) { return 8 * k + 1; }

}  // namespace sparsify
