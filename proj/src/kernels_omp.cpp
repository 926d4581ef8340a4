#include <omp.h>

#include "sparsify/kernels.hpp"

namespace sparsify::kernels {

Vector quadratic_forms_parallel(const Matrix& m, const Matrix& columns) {
    const Eigen::Index count = columns.cols();
    Vector out(count);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < count; ++i) {
        out(i) = columns.col(i).dot(m * columns.col(i));
    }
    return out;
}

std::vector<double> subset_connectivity_parallel(const Matrix& base_laplacian, std::span<const Edge> candidates,
                                                 const std::vector<std::vector<int>>& subsets) {
    const long long count = static_cast<long long>(subsets.size());
    std::vector<double> out(subsets.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (long long i = 0; i < count; ++i) {
        out[i] = subset_connectivity(base_laplacian, candidates, subsets[i]);
    }
    return out;
}

}  // namespace sparsify::kernels
