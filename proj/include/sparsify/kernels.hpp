#pragma once

// Data-parallel inner loops. Each kernel has a plain serial reference and an
// OpenMP version; both produce bit-identical results because every parallel
// loop writes disjoint slots and reductions run serially afterwards.

#include <cstddef>
#include <span>
#include <vector>

#include "sparsify/graph.hpp"
#include "sparsify/linalg.hpp"

namespace sparsify {

enum class Execution { Serial, Parallel };

namespace kernels {

/// out(i) = cᵢᵀ M cᵢ for every column cᵢ of `columns`.
Vector quadratic_forms_serial(const Matrix& m, const Matrix& columns);
Vector quadratic_forms_parallel(const Matrix& m, const Matrix& columns);
Vector quadratic_forms(const Matrix& m, const Matrix& columns, Execution exec = Execution::Parallel);

/// Every subset of {0..m-1} with at most k elements, ordered by size and
/// then lexicographically. Throws ProblemTooLarge above `limit` subsets.
std::vector<std::vector<int>> enumerate_subsets(int m, int k, std::size_t limit = 1'000'000);

/// λ₂(L_base + Σ_{e∈S} L_e) for one subset S of the unit-weight candidates.
double subset_connectivity(const Matrix& base_laplacian, std::span<const Edge> candidates,
                           const std::vector<int>& subset);

/// subset_connectivity for every subset.
std::vector<double> subset_connectivity_serial(const Matrix& base_laplacian, std::span<const Edge> candidates,
                                               const std::vector<std::vector<int>>& subsets);
std::vector<double> subset_connectivity_parallel(const Matrix& base_laplacian, std::span<const Edge> candidates,
                                                 const std::vector<std::vector<int>>& subsets);

/// Index of the largest value; the first one wins ties.
std::size_t argmax_first(std::span<const double> values);

}  // namespace kernels
}  // namespace sparsify
