#include "sparsify/algconn.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "sparsify/errors.hpp"
#include "sparsify/kernels.hpp"
#include "sparsify/patch.hpp"

namespace sparsify {

namespace {

// Orthonormal basis of the complement of the all-ones vector.
Matrix ones_complement_basis(int n) {
    Matrix a = Matrix::Identity(n, n);
    a.col(0) = Vector::Ones(n);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    return q.rightCols(n - 1);
}

Matrix weighted_laplacian(const ConnectivityInstance& inst, const std::vector<double>& weights) {
    Matrix l = laplacian(inst.base);
    for (std::size_t i = 0; i < inst.candidates.size(); ++i) {
        const double w = weights[i];
        if (w == 0.0) continue;
        const Edge& e = inst.candidates[i];
        l(e.u, e.u) += w;
        l(e.v, e.v) += w;
        l(e.u, e.v) -= w;
        l(e.v, e.u) -= w;
    }
    return l;
}

double second_eigenvalue(const Matrix& l) {
    const Vector ev = eigenvalues(l);
    return ev.size() >= 2 ? ev(1) : 0.0;
}

// Log-sum-exp smoothing of λ_min on the ones-complement:
// f_μ(w) = λ₁ − μ log Σ exp(−(λᵢ − λ₁)/μ), with f_μ ≤ λ₁ ≤ f_μ + μ log d.
// The softmax weights pᵢ define Y = Σ pᵢqᵢqᵢᵀ, a feasible point of the dual
// problem, so every evaluation also yields an upper bound on the optimum:
// tr(L_G Y) + max_{w ∈ P} Σ wₑ bₑᵀYbₑ.
struct SmoothedObjective {
    Matrix base;   // QᵀL_GQ
    Matrix edges;  // column e is Qᵀbₑ
    int k = 0;

    struct Value {
        double smooth = 0;
        double lambda2 = 0;
        double dual_bound = 0;
        double fw_gap = 0;  ///< max over the polytope of ⟨∇f_μ, z − w⟩
        Vector gradient;
    };

    Value operator()(const std::vector<double>& w, double mu) const {
        Matrix l = base;
        for (Eigen::Index e = 0; e < edges.cols(); ++e) {
            if (w[e] != 0.0) l.noalias() += w[e] * edges.col(e) * edges.col(e).transpose();
        }
        const auto dec = eigh(l);
        const double low = dec.values(0);
        Vector p = (-(dec.values.array() - low) / mu).exp();
        const double z = p.sum();
        p /= z;
        const Matrix proj = dec.vectors.transpose() * edges;  // (qᵢᵀcₑ)
        Value v;
        v.lambda2 = low;
        v.smooth = low - mu * std::log(z);
        v.gradient = proj.cwiseAbs2().transpose() * p;

        std::vector<double> g(v.gradient.data(), v.gradient.data() + v.gradient.size());
        const auto top = std::min<std::size_t>(static_cast<std::size_t>(k), g.size());
        std::partial_sort(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(top), g.end(), std::greater<>());
        const double best = std::accumulate(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(top), 0.0);
        double inner = 0.0;
        for (Eigen::Index e = 0; e < edges.cols(); ++e) inner += w[e] * v.gradient(e);
        v.dual_bound = p.dot(dec.values) - inner + best;
        v.fw_gap = best - inner;
        return v;
    }
};

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

}  // namespace

ConnectivityInstance ConnectivityInstance::make(WeightedGraph base, const WeightedGraph& candidates, int k) {
    if (base.num_vertices() != candidates.num_vertices()) {
        throw InvalidGraph("connectivity instance: base and candidate vertex counts differ");
    }
    if (k < 0) throw InvalidK("connectivity instance: k must be non-negative");
    ConnectivityInstance inst;
    for (const auto& e : candidates.edges()) {
        if (base.has_edge(e.u, e.v)) {
            throw PreconditionError("candidate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                    ") already belongs to the base graph");
        }
        inst.candidates.push_back({e.u, e.v, 1.0});
    }
    inst.delta = std::max({base.max_weighted_degree(), static_cast<double>(candidates.max_degree()), 1.0});
    inst.base = std::move(base);
    inst.k = k;
    return inst;
}

double algebraic_connectivity(const ConnectivityInstance& inst, const std::vector<double>& weights) {
    return second_eigenvalue(weighted_laplacian(inst, weights));
}

std::vector<double> project_capped_simplex(std::vector<double> w, double k) {
    auto clipped_sum = [&](double tau) {
        double s = 0.0;
        for (double x : w) s += std::clamp(x - tau, 0.0, 1.0);
        return s;
    };
    double tau = 0.0;
    if (clipped_sum(0.0) > k) {
        double lo = 0.0, hi = *std::max_element(w.begin(), w.end());
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            (clipped_sum(mid) > k ? lo : hi) = mid;
        }
        tau = hi;
    }
    for (double& x : w) x = std::clamp(x - tau, 0.0, 1.0);
    return w;
}

FractionalSolution solve_fractional(const ConnectivityInstance& inst, double tol, int max_iterations) {
    const int n = inst.num_vertices();
    const auto m = inst.candidates.size();
    FractionalSolution out;
    out.weights.assign(m, 0.0);
    if (n < 2 || m == 0 || inst.k == 0) {
        out.lambda_sdp = algebraic_connectivity(inst, out.weights);
        out.dual_bound = out.lambda_sdp;
        out.converged = true;
        return out;
    }

    const Matrix q = ones_complement_basis(n);
    SmoothedObjective objective{q.transpose() * laplacian(inst.base) * q,
                                Matrix(n - 1, static_cast<Eigen::Index>(m)), inst.k};
    for (std::size_t e = 0; e < m; ++e) {
        const Edge& c = inst.candidates[e];
        objective.edges.col(static_cast<Eigen::Index>(e)) = (q.row(c.u) - q.row(c.v)).transpose();
    }

    // Accelerated projected gradient ascent on f_μ with function-value
    // restarts. μ shrinks once the smoothed problem is solved to tol/4, and
    // the run stops when the best dual bound is within tol of the best λ₂.
    const double k = static_cast<double>(inst.k);
    std::vector<double> x = project_capped_simplex(std::vector<double>(m, std::min(1.0, k / m)), k);
    const double log_d = std::log(std::max(n - 1, 2));
    const double mu_min = tol / (4.0 * log_d);
    double mu = std::max(0.05 * inst.delta, mu_min);
    double step = 1.0 / inst.delta;
    double momentum = 1.0;
    std::vector<double> y = x;
    auto fx = objective(x, mu);
    out.weights = x;
    out.lambda_sdp = fx.lambda2;
    out.dual_bound = fx.dual_bound;

    int iterations = 0;
    std::vector<double> trial(m);
    while (iterations < max_iterations && out.dual_bound - out.lambda_sdp > tol) {
        ++iterations;
        const auto fy = objective(y, mu);
        out.dual_bound = std::min(out.dual_bound, fy.dual_bound);
        decltype(fx) fn;
        double dist2 = 0.0;
        while (true) {
            for (std::size_t e = 0; e < m; ++e) trial[e] = y[e] + step * fy.gradient(e);
            trial = project_capped_simplex(std::move(trial), k);
            fn = objective(trial, mu);
            dist2 = squared_distance(trial, y);
            double lin = 0.0;
            for (std::size_t e = 0; e < m; ++e) lin += fy.gradient(e) * (trial[e] - y[e]);
            if (fn.smooth >= fy.smooth + lin - dist2 / (2.0 * step) - 1e-15 || step < 1e-14) break;
            step *= 0.5;
        }
        out.gradient_norm = std::sqrt(dist2) / step;
        out.dual_bound = std::min(out.dual_bound, fn.dual_bound);
        if (fn.lambda2 > out.lambda_sdp) {
            out.lambda_sdp = fn.lambda2;
            out.weights = trial;
        }

        if (fn.smooth < fx.smooth) {
            // Restart: drop the momentum and continue from the better point.
            momentum = 1.0;
            y = x;
            continue;
        }
        const double next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
        const double beta = (momentum - 1.0) / next;
        for (std::size_t e = 0; e < m; ++e) y[e] = trial[e] + beta * (trial[e] - x[e]);
        x = trial;
        fx = std::move(fn);
        momentum = next;
        step = std::min(step * 1.25, 1e6);

        if (fx.fw_gap <= tol / 4.0 && mu > mu_min) {
            mu = std::max(mu * 0.25, mu_min);
            fx = objective(x, mu);
            momentum = 1.0;
            y = x;
        }
    }
    out.iterations = iterations;
    out.converged = out.dual_bound - out.lambda_sdp <= tol;
    // The stored value is the exact λ₂ at the returned weights.
    out.lambda_sdp = algebraic_connectivity(inst, out.weights);
    return out;
}

double lambda_k2_bound(const WeightedGraph& g, int k) {
    const int n = g.num_vertices();
    if (k + 2 > n) return std::numeric_limits<double>::infinity();
    return eigenvalues(laplacian(g))(k + 1);
}

RoundedSolution round_solution(const ConnectivityInstance& inst, const FractionalSolution& frac, Execution exec) {
    const int n = inst.num_vertices();
    const double scale = 4.0 * inst.delta;
    RoundedSolution out;
    out.lambda_sdp = frac.lambda_sdp;
    out.lambda_k2 = lambda_k2_bound(inst.base, inst.k);
    out.guaranteed_floor = std::isinf(out.lambda_k2)
                               ? frac.lambda_sdp * kExplicitLowerConstant
                               : out.lambda_k2 * frac.lambda_sdp * kExplicitLowerConstant / (scale * scale);

    std::vector<int> support;
    double total = 0.0;
    for (std::size_t i = 0; i < frac.weights.size(); ++i) {
        if (frac.weights[i] > 1e-12) {
            support.push_back(static_cast<int>(i));
            total += frac.weights[i];
        }
    }
    const double base_lambda = second_eigenvalue(laplacian(inst.base));
    if (inst.k == 0 || support.empty() || n < 2) {
        out.lambda_weighted = base_lambda;
        out.lambda_unweighted = base_lambda;
        return out;
    }

    const Matrix q = ones_complement_basis(n);
    const Eigen::Index d = n - 1;
    Matrix x = q.transpose() * laplacian(inst.base) * q / scale;
    symmetrize(x);
    Matrix updates(d, static_cast<Eigen::Index>(support.size()));
    std::vector<double> costs;
    for (std::size_t j = 0; j < support.size(); ++j) {
        const Edge& e = inst.candidates[support[j]];
        const double w = frac.weights[support[j]];
        updates.col(static_cast<Eigen::Index>(j)) = std::sqrt(w / scale) * (q.row(e.u) - q.row(e.v)).transpose();
        costs.push_back(w / total);
    }
    const int k_engine = std::min<int>(inst.k, static_cast<int>(d));
    out.budget = default_patch_budget(k_engine);
    const EngineProblem problem =
        EngineProblem::from_updates(std::move(x), std::move(updates), std::move(costs), k_engine, out.budget);
    const EngineResult res = run_engine(problem, exec);
    out.monotonicity_violations = res.monotonicity_violations;
    out.trace = res.trace;
    out.weight_ceiling = res.theta_max * scale;

    std::vector<double> rounded(inst.candidates.size(), 0.0);
    std::vector<double> unit(inst.candidates.size(), 0.0);
    for (std::size_t j = 0; j < support.size(); ++j) {
        const double rho = res.weights[j];
        if (rho <= 0.0) continue;
        const int idx = support[j];
        rounded[idx] = rho * frac.weights[idx];
        unit[idx] = 1.0;
        out.selected.push_back(inst.candidates[idx]);
        out.rounded_weights.push_back(rounded[idx]);
    }
    out.lambda_weighted = algebraic_connectivity(inst, rounded);
    out.lambda_unweighted = algebraic_connectivity(inst, unit);
    return out;
}

BruteForceResult brute_force_opt(const ConnectivityInstance& inst, Execution exec) {
    const int m = static_cast<int>(inst.candidates.size());
    const auto subsets = kernels::enumerate_subsets(m, std::min(inst.k, m));
    const Matrix base = laplacian(inst.base);
    const auto values = exec == Execution::Serial
                            ? kernels::subset_connectivity_serial(base, inst.candidates, subsets)
                            : kernels::subset_connectivity_parallel(base, inst.candidates, subsets);
    const std::size_t best = kernels::argmax_first(values);
    BruteForceResult out;
    out.lambda2 = values[best];
    out.evaluated = subsets.size();
    for (int idx : subsets[best]) out.edges.push_back(inst.candidates[idx]);
    return out;
}

}  // namespace sparsify
