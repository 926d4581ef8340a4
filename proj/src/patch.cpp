#include "sparsify/patch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sparsify/errors.hpp"

namespace sparsify {

namespace {

// Orthonormal basis of im(L) and the matching Λ^{-1/2}.
struct ImageFrame {
    Matrix q;
    Vector inv_sqrt;
};

ImageFrame image_frame(const Matrix& l) {
    const auto dec = eigh(l);
    const Eigen::Index r = dec.rank();
    return {dec.vectors.rightCols(r), dec.values.tail(r).cwiseSqrt().cwiseInverse()};
}

Matrix whiten(const ImageFrame& f, const Matrix& a) {
    Matrix out = f.inv_sqrt.asDiagonal() * (f.q.transpose() * a * f.q) * f.inv_sqrt.asDiagonal();
    symmetrize(out);
    return out;
}

struct LocalGraphs {
    std::vector<int> vertices;
    WeightedGraph g;
    WeightedGraph w;
};

}  // namespace

PatchParams verify_patch(const WeightedGraph& g, const WeightedGraph& w, int k) {
    if (g.num_vertices() != w.num_vertices()) throw InvalidGraph("verify_patch: vertex counts differ");
    const ImageFrame frame = image_frame(laplacian(g + w));
    const Matrix x = whiten(frame, laplacian(g));
    const int d = static_cast<int>(x.rows());
    if (k < 0 || k >= d) {
        throw InvalidK("verify_patch: k = " + std::to_string(k) + " must lie in [0, " + std::to_string(d) +
                       ") for an image of rank " + std::to_string(d));
    }
    const Vector ev = eigenvalues(x);
    return {k, d - x.trace(), ev(k), d};
}

PatchProblem build_patch_problem(const WeightedGraph& g, const WeightedGraph& w, int k, int budget) {
    if (g.num_vertices() != w.num_vertices()) throw InvalidGraph("build_patch_problem: vertex counts differ");
    if (w.num_edges() == 0) throw PreconditionError("build_patch_problem: W has no edges");
    const ImageFrame frame = image_frame(laplacian(g + w));
    const Eigen::Index d = frame.q.cols();

    PatchProblem out;
    out.w_edges = w.edges();
    Matrix updates(d, static_cast<Eigen::Index>(out.w_edges.size()));
    std::vector<double> costs;
    costs.reserve(out.w_edges.size());
    const double w_total = w.total_weight();
    for (std::size_t i = 0; i < out.w_edges.size(); ++i) {
        const Edge& e = out.w_edges[i];
        const Vector diff = (frame.q.row(e.u) - frame.q.row(e.v)).transpose();
        updates.col(static_cast<Eigen::Index>(i)) = std::sqrt(e.w) * frame.inv_sqrt.cwiseProduct(diff);
        costs.push_back(e.w / w_total);
    }

    EngineProblem& p = out.engine;
    p.x = whiten(frame, laplacian(g));
    p.updates = std::move(updates);
    p.costs = std::move(costs);
    p.mstar = Matrix::Identity(d, d);
    p.k = k;
    p.budget = budget;
    p.trace_bound = trace_ceiling(static_cast<double>(d) - p.x.trace());
    p.validate();
    return out;
}

PatchSparsifier sparsify_patch(const WeightedGraph& g, const WeightedGraph& w, int k, int budget, Execution exec) {
    if (g.num_vertices() != w.num_vertices()) throw InvalidGraph("sparsify_patch: vertex counts differ");
    if (k < 0) throw InvalidK("sparsify_patch: k must be non-negative");
    if (budget <= 8 * k) {
        throw BudgetTooSmall("update budget N = " + std::to_string(budget) + " must exceed 8k = " +
                             std::to_string(8 * k) + " (N > 8k)");
    }
    const int n = g.num_vertices();
    const WeightedGraph gw = g + w;
    const auto comps = gw.components();

    // Split into components of G+W that carry W edges.
    std::vector<LocalGraphs> locals;
    {
        std::vector<std::vector<int>> members(comps.count);
        for (int v = 0; v < n; ++v) members[comps.label[v]].push_back(v);
        std::vector<int> local_index(n, -1);
        for (auto& vs : members) {
            for (int i = 0; i < static_cast<int>(vs.size()); ++i) local_index[vs[i]] = i;
        }
        std::vector<std::vector<Edge>> g_edges(comps.count), w_edges(comps.count);
        for (const auto& e : g.edges()) g_edges[comps.label[e.u]].push_back({local_index[e.u], local_index[e.v], e.w});
        for (const auto& e : w.edges()) w_edges[comps.label[e.u]].push_back({local_index[e.u], local_index[e.v], e.w});
        for (int c = 0; c < comps.count; ++c) {
            if (w_edges[c].empty()) continue;
            const int nc = static_cast<int>(members[c].size());
            locals.push_back({members[c], WeightedGraph(nc, g_edges[c]), WeightedGraph(nc, w_edges[c])});
        }
    }

    PatchSparsifier out;
    std::vector<Edge> kept;
    std::vector<int> traces;
    for (const auto& lc : locals) {
        const ImageFrame frame = image_frame(laplacian(lc.g + lc.w));
        const Matrix x = whiten(frame, laplacian(lc.g));
        traces.push_back(trace_ceiling(static_cast<double>(x.rows()) - x.trace()));
    }
    long long trace_sum = 0;
    for (int t : traces) trace_sum += t;

    for (std::size_t c = 0; c < locals.size(); ++c) {
        const auto& lc = locals[c];
        const int d = lc.g.num_vertices() - 1;
        PatchComponent pc;
        pc.vertices = lc.vertices;
        pc.k = std::min(k, d);
        if (locals.size() == 1) {
            pc.budget = budget;
        } else {
            const auto share = static_cast<int>(std::floor(static_cast<double>(budget) * traces[c] / trace_sum));
            pc.budget = std::max(default_patch_budget(pc.k), share);
        }
        const PatchProblem prob = build_patch_problem(lc.g, lc.w, pc.k, pc.budget);
        const EngineResult res = run_engine(prob.engine, exec);

        pc.trace_bound = prob.engine.trace_bound;
        pc.lambda_star = res.lambda_star;
        pc.certified_lower = res.certified_lower_explicit;
        pc.analytic_lower = res.certified_lower;
        pc.theta_max = res.theta_max;
        pc.w_total = lc.w.total_weight();
        pc.monotonicity_violations = res.monotonicity_violations;
        pc.trace = res.trace;
        for (std::size_t i = 0; i < prob.w_edges.size(); ++i) {
            const double rho = res.weights[i];
            if (rho <= 0.0) continue;
            const Edge& e = prob.w_edges[i];
            kept.push_back({lc.vertices[e.u], lc.vertices[e.v], rho * e.w});
            pc.wk_total += rho * e.w;
            ++pc.support;
        }
        out.weight_budget += std::min(1.0, static_cast<double>(pc.budget) / pc.trace_bound) * pc.w_total;
        out.components.push_back(std::move(pc));
    }

    out.wk = WeightedGraph(n, std::move(kept));
    out.total_weight = out.wk.total_weight();
    if (!out.components.empty()) {
        out.certified_lower = std::numeric_limits<double>::infinity();
        out.analytic_lower = std::numeric_limits<double>::infinity();
        out.certified_upper = kExplicitUpperConstant;
        for (const auto& pc : out.components) {
            out.certified_lower = std::min(out.certified_lower, pc.certified_lower);
            out.analytic_lower = std::min(out.analytic_lower, pc.analytic_lower);
        }
        out.certified_lower = std::min(out.certified_lower, 1.0);
        out.analytic_lower = std::min(out.analytic_lower, 1.0);
    }
    const PencilRange measured = range_of(pencil_eigenvalues_on_image(laplacian(g + out.wk), laplacian(gw)));
    out.measured_lower = measured.lower;
    out.measured_upper = measured.upper;
    return out;
}

}  // namespace sparsify
