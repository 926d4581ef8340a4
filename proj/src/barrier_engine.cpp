#include "sparsify/barrier_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sparsify/errors.hpp"

namespace sparsify {

namespace {

constexpr double kIdentityTol = 1e-8;
constexpr double kDeadDirectionTol = 1e-8;  // relative to λ_max(M* − X)

double top_sum(const Vector& ascending, int count, double shift) {
    const Eigen::Index n = ascending.size();
    const Eigen::Index take = std::min<Eigen::Index>(std::max(count, 0), n);
    double s = 0.0;
    for (Eigen::Index i = n - take; i < n; ++i) s += 1.0 / (shift - ascending(i));
    return s;
}

}  // namespace

int trace_ceiling(double trace) {
    return std::max(1, static_cast<int>(std::ceil(trace - 1e-9)));
}

EngineProblem EngineProblem::from_updates(Matrix x, Matrix updates, std::vector<double> costs, int k, int budget) {
    EngineProblem p;
    p.mstar = x + updates * updates.transpose();
    symmetrize(p.mstar);
    p.trace_bound = trace_ceiling((p.mstar - x).trace());
    p.x = std::move(x);
    p.updates = std::move(updates);
    p.costs = std::move(costs);
    p.k = k;
    p.budget = budget;
    p.validate();
    return p;
}

void EngineProblem::validate() const {
    const Eigen::Index d = x.rows();
    if (x.cols() != d || mstar.rows() != d || mstar.cols() != d || updates.rows() != d) {
        throw PreconditionError("engine problem: dimension mismatch");
    }
    if (static_cast<Eigen::Index>(costs.size()) != updates.cols()) {
        throw PreconditionError("engine problem: one cost per update required");
    }
    if (k < 0 || k > d) {
        throw InvalidK("engine problem: k = " + std::to_string(k) + " outside [0, " + std::to_string(d) + "]");
    }
    if (budget <= 8 * k) {
        throw BudgetTooSmall("update budget N = " + std::to_string(budget) + " must exceed 8k = " +
                             std::to_string(8 * k) + " (N > 8k)");
    }
    if (trace_bound < 1) throw PreconditionError("engine problem: trace bound T must be at least 1");
    const double residual = max_abs(x + updates * updates.transpose() - mstar);
    if (residual > kIdentityTol) {
        throw PreconditionError("engine problem: X + Σ Yᵢ differs from M* by " + std::to_string(residual));
    }
    if (d > 0 && eigenvalues(mstar)(d - 1) > 1.0 + 1e-9) {
        throw PreconditionError("engine problem: λ_max(M*) exceeds 1");
    }
    double total = 0.0;
    for (double c : costs) {
        if (c < 0.0) throw PreconditionError("engine problem: negative cost");
        total += c;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw PreconditionError("engine problem: costs sum to " + std::to_string(total) + ", not 1");
    }
}

EngineSchedule init_schedule(int k, int budget, int trace_bound) {
    if (budget <= 8 * k) {
        throw BudgetTooSmall("update budget N = " + std::to_string(budget) + " must exceed 8k = " +
                             std::to_string(8 * k) + " (N > 8k)");
    }
    if (trace_bound < 1) throw PreconditionError("schedule: T must be at least 1");
    EngineSchedule s;
    s.scale = std::max(budget, trace_bound);
    s.delta_lower = 1.0 / (2.0 * s.scale);
    s.delta_upper = 4.0 * s.delta_lower;
    s.eps_lower = 1.0 / (4.0 * s.delta_lower);
    s.eps_upper = s.eps_lower;
    s.l0 = -4.0 * k * s.delta_lower;
    s.u0 = 4.0 * trace_bound * s.delta_lower + 1.0;
    return s;
}

Subspace fixed_subspace(const Matrix& x, int k) {
    if (k < 0 || k > x.rows()) throw InvalidK("fixed_subspace: k outside [0, n]");
    if (k == 0) return Subspace::zero(x.rows());
    const auto dec = eigh(x);
    return Subspace(dec.vectors.leftCols(k));
}

ZMatrix compute_z(const Matrix& x, const Matrix& mstar, const Subspace& s) {
    const Eigen::Index n = x.rows();
    ZMatrix out{Matrix::Zero(n, n), 0.0};
    if (s.dim() == 0) return out;
    const Matrix gap = mstar - x;
    const Vector gap_ev = eigenvalues(gap);
    const double gap_max = std::max(gap_ev(gap_ev.size() - 1), 0.0);
    Matrix restricted = restrict_to(gap, s);
    auto dec = eigh(restricted);
    if (dec.values(0) <= kDeadDirectionTol * gap_max) {
        out.perturbation = kDeadDirectionTol * std::max(gap_max, 1e-300);
        restricted += out.perturbation * Matrix::Identity(s.dim(), s.dim());
        dec = eigh(restricted);
    }
    const Matrix inv_sqrt = dec.apply([](double v) { return 1.0 / std::sqrt(v); });
    out.z = s.basis() * inv_sqrt * s.basis().transpose();
    symmetrize(out.z);
    return out;
}

double lower_potential(const Matrix& b, double l, const Subspace& s) {
    if (s.dim() == 0) return 0.0;
    const Vector ev = eigenvalues(restrict_to(b, s));
    if (ev(0) <= l) {
        throw BarrierViolation("lower barrier crossed: λ_min(B|_S) = " + std::to_string(ev(0)) +
                               " ≤ l = " + std::to_string(l));
    }
    return (ev.array() - l).inverse().sum();
}

double upper_potential(const Matrix& a, double u, int t) {
    if (a.rows() == 0) return 0.0;
    const Vector ev = eigenvalues(a);
    if (ev(ev.size() - 1) >= u) {
        throw BarrierViolation("upper barrier crossed: λ_max(A) = " + std::to_string(ev(ev.size() - 1)) +
                               " ≥ u = " + std::to_string(u));
    }
    return top_sum(ev, t, u);
}

Matrix upper_gradient(const Matrix& a, double u, double delta, int t) {
    const auto dec = eigh(a);
    const Eigen::Index n = dec.size();
    if (n == 0) return Matrix(0, 0);
    if (dec.values(n - 1) >= u) {
        throw BarrierViolation("upper_gradient: λ_max(A) ≥ u");
    }
    const double shifted = u + delta;
    const double diff = top_sum(dec.values, t, u) - top_sum(dec.values, t, shifted);
    if (diff <= 1e-14) throw DegenerateGradient("upper_gradient: potential difference vanishes");
    Matrix out = dec.apply([&](double lam) {
        const double inv = 1.0 / (shifted - lam);
        return inv * inv / diff + inv;
    });
    symmetrize(out);
    return out;
}

Matrix lower_gradient(const Matrix& b, double l, double delta, const Subspace& s) {
    const Eigen::Index n = b.rows();
    if (s.dim() == 0) return Matrix::Zero(n, n);
    const auto dec = eigh(restrict_to(b, s));
    const double shifted = l + delta;
    if (dec.values(0) <= shifted) {
        throw BarrierViolation("lower_gradient: λ_min(B|_S) = " + std::to_string(dec.values(0)) +
                               " ≤ l + δ = " + std::to_string(shifted));
    }
    const double diff = (dec.values.array() - shifted).inverse().sum() - (dec.values.array() - l).inverse().sum();
    if (diff <= 1e-300) throw DegenerateGradient("lower_gradient: potential difference vanishes");
    const Matrix inner = dec.apply([&](double mu) {
        const double inv = 1.0 / (mu - shifted);
        return inv * inv / diff - inv;
    });
    Matrix out = s.basis() * inner * s.basis().transpose();
    symmetrize(out);
    return out;
}

EngineState EngineState::initial(const EngineProblem& p, const EngineSchedule& sched, Subspace s, Matrix z) {
    const Eigen::Index d = p.dim();
    EngineState st{0, std::vector<double>(p.num_updates(), 0.0), p.x, Matrix::Zero(d, d),
                   sched.l0, sched.u0, std::move(s), std::move(z), Matrix()};
    st.z_updates = st.z * p.updates;
    return st;
}

Selection select_update(const EngineProblem& p, const EngineState& state, const EngineSchedule& sched,
                        Execution exec) {
    const Matrix ua = upper_gradient(state.a, state.u, sched.delta_upper, p.trace_bound);
    const Vector upper = kernels::quadratic_forms(ua, p.updates, exec);
    const double scale = sched.scale;
    const Eigen::Index m = p.num_updates();

    Selection best;
    double best_key = -std::numeric_limits<double>::infinity();
    if (state.s.dim() == 0) {
        for (Eigen::Index i = 0; i < m; ++i) {
            const double denom = upper(i) + scale * p.costs[i];
            if (!(denom > 0.0)) continue;  // vᵢ = 0 with zero cost contributes nothing
            const double t = 1.0 / denom;
            const double gain = t * p.updates.col(i).squaredNorm();
            if (gain > best_key) {
                best_key = gain;
                best = {static_cast<int>(i), t, upper(i), 0.0, 0.0};
            }
        }
        if (best.index < 0) throw InfeasibleStep(state.step, upper_potential(state.a, state.u, p.trace_bound), 0.0, 0.0);
        return best;
    }

    const Matrix lb = lower_gradient(state.b, state.l, sched.delta_lower, state.s);
    const Vector lower = kernels::quadratic_forms(lb, state.z_updates, exec);
    double best_slack = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
        const double slack = lower(i) - upper(i) - scale * p.costs[i];
        best_slack = std::max(best_slack, slack);
        const bool feasible = lower(i) > 0.0 && slack >= -1e-12 * std::max(1.0, lower(i));
        if (feasible && slack > best_key) {
            best_key = slack;
            best = {static_cast<int>(i), 1.0 / lower(i), upper(i), lower(i), slack};
        }
    }
    if (best.index < 0) {
        throw InfeasibleStep(state.step, upper_potential(state.a, state.u, p.trace_bound),
                             lower_potential(state.b, state.l, state.s), best_slack);
    }
    return best;
}

double analytic_lower_bound(double theta_min, double theta_max, double lambda_star, double mstar_lambda_min) {
    const double floor_s = theta_min * std::max(mstar_lambda_min, 0.0);
    if (std::isinf(lambda_star)) return floor_s;
    const double ls = std::max(lambda_star, 0.0);
    const double denom = std::sqrt(ls) + std::sqrt(theta_max) + std::sqrt(floor_s);
    return floor_s * ls / (denom * denom);
}

EngineResult run_engine(const EngineProblem& p, Execution exec) {
    p.validate();
    const Eigen::Index d = p.dim();
    const EngineSchedule sched = init_schedule(p.k, p.budget, p.trace_bound);

    // The lower barrier lives on S minus the directions that no update can
    // reach (where P_S(M* − X)P_S vanishes); there A − X stays zero, which is
    // all the final bound needs.
    const Subspace s = fixed_subspace(p.x, p.k);
    const Matrix gap = p.mstar - p.x;
    Subspace lower_space = Subspace::zero(d);
    if (s.dim() > 0) {
        const Vector gap_ev = eigenvalues(gap);
        const double cutoff = kDeadDirectionTol * std::max(gap_ev(d - 1), 0.0);
        const auto restricted = eigh(restrict_to(gap, s));
        const Eigen::Index live = (restricted.values.array() > cutoff).count();
        lower_space = Subspace(s.basis() * restricted.vectors.rightCols(live));
    }
    ZMatrix zm = compute_z(p.x, p.mstar, lower_space);

    EngineState state = EngineState::initial(p, sched, lower_space, std::move(zm.z));
    EngineResult r;
    r.schedule = sched;
    r.perturbation = zm.perturbation;
    r.lower_dim = static_cast<int>(lower_space.dim());
    r.trace.reserve(p.budget);

    double cost = 0.0;
    double up_prev = upper_potential(state.a, state.u, p.trace_bound);
    double lo_prev = lower_potential(state.b, state.l, state.s);
    for (int q = 0; q < p.budget; ++q) {
        const Selection sel = select_update(p, state, sched, exec);
        const Vector& v = p.updates.col(sel.index);
        const Vector zv = state.z_updates.col(sel.index);
        StepTrace tr{q, sel.index, sel.step, state.l, state.u, up_prev, lo_prev, 0, 0, 0};

        state.a.noalias() += sel.step * (v * v.transpose());
        state.b.noalias() += sel.step * (zv * zv.transpose());
        symmetrize(state.a);
        symmetrize(state.b);
        state.weights[sel.index] += sel.step;
        state.l += sched.delta_lower;
        state.u += sched.delta_upper;
        state.step = q + 1;
        cost += sel.step * p.costs[sel.index];

        tr.upper_after = upper_potential(state.a, state.u, p.trace_bound);
        tr.lower_after = lower_potential(state.b, state.l, state.s);
        tr.total_cost = cost;
        const double increase = std::max(tr.upper_after - up_prev, tr.lower_after - lo_prev);
        r.max_potential_increase = std::max(r.max_potential_increase, increase);
        if (increase > 1e-9) ++r.monotonicity_violations;
        up_prev = tr.upper_after;
        lo_prev = tr.lower_after;
        r.trace.push_back(tr);
    }

    r.weights = state.weights;
    r.m = state.a;
    r.total_cost = cost;
    r.support = static_cast<int>(std::count_if(r.weights.begin(), r.weights.end(), [](double w) { return w > 0; }));
    const Vector m_ev = eigenvalues(r.m);
    r.lambda_min = d > 0 ? m_ev(0) : 0.0;
    r.lambda_max = d > 0 ? m_ev(d - 1) : 0.0;
    if (state.s.dim() > 0) r.restricted_lower = eigenvalues(restrict_to(state.b, state.s))(0);
    r.theta_max = 2.0 * (p.budget + p.trace_bound) / sched.scale + 1.0;
    r.theta_min = (p.budget / 2.0 - 2.0 * p.k) / sched.scale;

    const Vector x_ev = eigenvalues(p.x);
    r.lambda_star = p.k < d ? x_ev(p.k) : std::numeric_limits<double>::infinity();
    r.mstar_lambda_min = d > 0 ? eigenvalues(p.mstar)(0) : 0.0;
    r.certified_lower = analytic_lower_bound(r.theta_min, r.theta_max, r.lambda_star, r.mstar_lambda_min);
    r.certified_lower_explicit = std::min(static_cast<double>(p.budget) / p.trace_bound, 1.0) *
                                 std::min(r.lambda_star, 1.0) * r.mstar_lambda_min * kExplicitLowerConstant;
    return r;
}

}  // namespace sparsify
