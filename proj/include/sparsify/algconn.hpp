#pragma once

#include <cstddef>
#include <vector>

#include "sparsify/barrier_engine.hpp"
#include "sparsify/graph.hpp"

namespace sparsify {

/// Base graph plus unit-weight candidate edges disjoint from it.
struct ConnectivityInstance {
    WeightedGraph base;
    std::vector<Edge> candidates;
    int k = 0;
    /// max(max weighted degree of the base, max degree of the candidates, 1)
    double delta = 1.0;

    /// Candidate weights are ignored. Throws PreconditionError when a
    /// candidate duplicates a base edge.
    static ConnectivityInstance make(WeightedGraph base, const WeightedGraph& candidates, int k);
    int num_vertices() const { return base.num_vertices(); }
};

/// λ₂(L_G + Σ wₑ Lₑ).
double algebraic_connectivity(const ConnectivityInstance& inst, const std::vector<double>& weights);

struct FractionalSolution {
    std::vector<double> weights;
    double lambda_sdp = 0;  ///< λ₂ at `weights`
    double dual_bound = 0;  ///< certified upper bound on the relaxation optimum
    int iterations = 0;
    double gradient_norm = 0;
    bool converged = false;
};

/// Maximizes the concave map w ↦ λ₂(L_G + Σ wₑLₑ) over {0 ≤ w ≤ 1, Σw ≤ k}.
/// converged means dual_bound − lambda_sdp ≤ tol. Hitting the iteration cap
/// returns the best iterate with converged = false.
FractionalSolution solve_fractional(const ConnectivityInstance& inst, double tol = 1e-4, int max_iterations = 5000);

/// Euclidean projection onto {0 ≤ w ≤ 1, Σw ≤ k}.
std::vector<double> project_capped_simplex(std::vector<double> w, double k);

/// λ_{k+2}(L_G), or +∞ when k + 2 > n.
double lambda_k2_bound(const WeightedGraph& g, int k);

struct RoundedSolution {
    std::vector<Edge> selected;          ///< unit-weight edges of the support
    std::vector<double> rounded_weights; ///< w̃ₑ = ρₑwₑ, aligned with `selected`
    double lambda_weighted = 0;          ///< λ₂(L_G + Σ w̃ₑLₑ)
    double lambda_unweighted = 0;        ///< λ₂(L_{G+E})
    double lambda_sdp = 0;
    double lambda_k2 = 0;
    double guaranteed_floor = 0;
    double weight_ceiling = 0;           ///< θ_max·4Δ
    int budget = 0;                      ///< engine N
    int monotonicity_violations = 0;
    std::vector<StepTrace> trace;
};

/// Sparsifies a fractional solution through the barrier engine with
/// X = L_G/(4Δ) and Yₑ = wₑLₑ/(4Δ) on (1,…,1)^⊥.
RoundedSolution round_solution(const ConnectivityInstance& inst, const FractionalSolution& frac,
                               Execution exec = Execution::Parallel);

struct BruteForceResult {
    double lambda2 = 0;
    std::vector<Edge> edges;
    std::size_t evaluated = 0;
};

/// Exact optimum over every candidate subset of size at most k.
/// Throws ProblemTooLarge beyond 10⁶ subsets.
BruteForceResult brute_force_opt(const ConnectivityInstance& inst, Execution exec = Execution::Parallel);

}  // namespace sparsify
