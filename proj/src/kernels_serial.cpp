#include <algorithm>
#include <string>

#include "sparsify/errors.hpp"
#include "sparsify/kernels.hpp"

namespace sparsify::kernels {

Vector quadratic_forms_serial(const Matrix& m, const Matrix& columns) {
    Vector out(columns.cols());
    for (Eigen::Index i = 0; i < columns.cols(); ++i) {
        out(i) = columns.col(i).dot(m * columns.col(i));
    }
    return out;
}

Vector quadratic_forms(const Matrix& m, const Matrix& columns, Execution exec) {
    return exec == Execution::Serial ? quadratic_forms_serial(m, columns) : quadratic_forms_parallel(m, columns);
}

std::vector<std::vector<int>> enumerate_subsets(int m, int k, std::size_t limit) {
    k = std::clamp(k, 0, std::max(m, 0));
    // Count first so oversized requests fail before allocating.
    double total = 0.0, binom = 1.0;
    for (int s = 0; s <= k; ++s) {
        if (s > 0) binom = binom * (m - s + 1) / s;
        total += binom;
    }
    if (total > static_cast<double>(limit)) {
        throw ProblemTooLarge("subset enumeration needs " + std::to_string(static_cast<long long>(total)) +
                              " evaluations (limit " + std::to_string(limit) + ")");
    }
    std::vector<std::vector<int>> out;
    out.reserve(static_cast<std::size_t>(total));
    for (int s = 0; s <= k; ++s) {
        std::vector<int> idx(s);
        for (int i = 0; i < s; ++i) idx[i] = i;
        while (true) {
            out.push_back(idx);
            int pos = s - 1;
            while (pos >= 0 && idx[pos] == m - s + pos) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (int j = pos + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return out;
}

double subset_connectivity(const Matrix& base, std::span<const Edge> candidates, const std::vector<int>& subset) {
    Matrix l = base;
    for (int idx : subset) {
        const Edge& e = candidates[idx];
        l(e.u, e.u) += 1.0;
        l(e.v, e.v) += 1.0;
        l(e.u, e.v) -= 1.0;
        l(e.v, e.u) -= 1.0;
    }
    const Vector ev = eigenvalues(l);
    return ev.size() >= 2 ? ev(1) : 0.0;
}

std::vector<double> subset_connectivity_serial(const Matrix& base_laplacian, std::span<const Edge> candidates,
                                               const std::vector<std::vector<int>>& subsets) {
    std::vector<double> out(subsets.size());
    for (std::size_t i = 0; i < subsets.size(); ++i) out[i] = subset_connectivity(base_laplacian, candidates, subsets[i]);
    return out;
}

std::size_t argmax_first(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

}  // namespace sparsify::kernels
