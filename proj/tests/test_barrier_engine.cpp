#include <doctest.h>

#include <cmath>
#include <random>

#include "sparsify/barrier_engine.hpp"
#include "sparsify/errors.hpp"
#include "support/generators.hpp"

using namespace sparsify;
using doctest::Approx;

TEST_CASE("schedule for k=1, N=9, T=4") {
    CHECK_THROWS_AS(init_schedule(1, 8, 4), BudgetTooSmall);
    const auto s = init_schedule(1, 9, 4);
    CHECK(s.delta_lower == Approx(1.0 / 18));
    CHECK(s.delta_upper == Approx(2.0 / 9));
    CHECK(s.eps_lower == Approx(4.5));
    CHECK(s.eps_upper == Approx(4.5));
    CHECK(s.l0 == Approx(-2.0 / 9));
    CHECK(s.u0 == Approx(4.0 * 4 / 18 + 1));
    CHECK(init_schedule(1, 16, 16).delta_lower == Approx(1.0 / 32));
}

// The lower side equals 1.5·max(N,T) as intended; with δ_U = 4δ_L and
// ε_U = 1/(4δ_L) the upper side comes out at 2·max(N,T), not 1.5·max(N,T).
TEST_CASE("schedule balance values") {
    for (int k : {0, 1, 2, 5}) {
        for (int n : {8 * k + 1, 8 * k + 7, 100}) {
            for (int t : {1, 3, 50, 400}) {
                const auto s = init_schedule(k, n, t);
                const double scale = std::max(n, t);
                CHECK(1 / s.delta_upper + s.eps_upper + scale == Approx(2.0 * scale));
                CHECK(1 / s.delta_lower - s.eps_lower == Approx(1.5 * scale));
            }
        }
    }
}

TEST_CASE("trace ceiling") {
    CHECK(trace_ceiling(0.0) == 1);
    CHECK(trace_ceiling(2.0 + 1e-12) == 2);
    CHECK(trace_ceiling(2.1) == 3);
}

TEST_CASE("fixed subspace") {
    Matrix x = Vector(Vector::LinSpaced(3, 1, 3)).asDiagonal();
    const auto s = fixed_subspace(x, 2);
    CHECK(s.dim() == 2);
    CHECK(max_abs(s.projection() - Vector(Vector::Ones(3) - Vector::Unit(3, 2)).asDiagonal().toDenseMatrix()) < 1e-14);
    CHECK(fixed_subspace(x, 0).dim() == 0);

    std::mt19937_64 rng(1);
    const Matrix r = testgen::random_psd(rng, 10, 10);
    const Vector ev = eigenvalues(r);
    for (int k = 1; k < 10; ++k) CHECK(eigenvalues(restrict_to(r, fixed_subspace(r, k))).maxCoeff() == Approx(ev(k - 1)));
}

TEST_CASE("compute_z") {
    Matrix x = Matrix::Identity(3, 3) * 0.1;
    Matrix q = Matrix::Zero(3, 2);
    q(0, 0) = q(1, 1) = 1;
    const Subspace s(q);
    const Matrix ps = s.projection();
    CHECK(max_abs(compute_z(x, x + ps, s).z - ps) < 1e-12);
    CHECK(max_abs(compute_z(x, x + 4 * ps, s).z - ps / 2) < 1e-12);

    std::mt19937_64 rng(4);
    const auto p = testgen::random_engine_problem(rng, 12, 30, 3, 25);
    const auto sr = fixed_subspace(p.x, 3);
    const auto zm = compute_z(p.x, p.mstar, sr);
    const Matrix pgp = sr.projection() * (p.mstar - p.x) * sr.projection();
    CHECK(zm.perturbation == 0.0);
    CHECK(max_abs(zm.z * pgp * zm.z - sr.projection()) < 1e-7);
}

TEST_CASE("compute_z perturbs a singular restriction") {
    Matrix q = Matrix::Zero(3, 1);
    q(0, 0) = 1;
    Matrix gap = Matrix::Zero(3, 3);
    gap(1, 1) = 2;
    const auto zm = compute_z(Matrix::Zero(3, 3), gap, Subspace(q));
    CHECK(zm.perturbation == Approx(2e-8));
    CHECK(zm.z(0, 0) == Approx(1 / std::sqrt(2e-8)));
}

TEST_CASE("lower potential") {
    const int k = 3;
    const auto sched = init_schedule(k, 25, 5);
    Matrix q = Matrix::Identity(5, 5).leftCols(k);
    const Subspace s(q);
    CHECK(lower_potential(Matrix::Zero(5, 5), sched.l0, s) == Approx(sched.eps_lower));
    CHECK(lower_potential(Matrix::Identity(5, 5), 0.0, s) == Approx(3.0));
    CHECK_THROWS_AS(lower_potential(Matrix::Zero(5, 5), 0.0, s), BarrierViolation);

    std::mt19937_64 rng(6);
    const Matrix b = testgen::random_psd(rng, 8, 8);
    const Subspace rs = fixed_subspace(testgen::random_psd(rng, 8, 8), 4);
    const Vector ev = eigenvalues(restrict_to(b, rs));
    CHECK(lower_potential(b, -0.5, rs) == Approx((1.0 / (ev.array() + 0.5)).sum()).epsilon(1e-12));
}

TEST_CASE("upper potential") {
    CHECK(upper_potential(Matrix::Zero(4, 4), 1.0, 4) == Approx(4.0));
    const auto sched = init_schedule(1, 9, 4);
    Matrix x = Matrix::Identity(6, 6) * 0.9;
    CHECK(upper_potential(x, sched.u0, 4) <= sched.eps_upper + 1e-12);
    CHECK_THROWS_AS(upper_potential(x, 0.9, 2), BarrierViolation);

    std::mt19937_64 rng(7);
    const Matrix a = testgen::random_psd(rng, 8, 8);
    const Vector ev = eigenvalues(a);
    const double u = ev.maxCoeff() + 0.3;
    double oracle = 0;
    for (int i = 5; i < 8; ++i) oracle += 1 / (u - ev(i));
    CHECK(upper_potential(a, u, 3) == Approx(oracle).epsilon(1e-12));
}

TEST_CASE("upper gradient scalar value") {
    const Matrix g = upper_gradient(Matrix::Zero(1, 1), 2.0, 1.0, 1);
    CHECK(g(0, 0) == Approx(1.0));
}

TEST_CASE("lower gradient scalar value") {
    const Matrix g = lower_gradient(Matrix::Ones(1, 1), 0.0, 0.5, Subspace::full(1));
    CHECK(g(0, 0) == Approx(2.0));
}

TEST_CASE("gradients are PSD / supported on S and match finite differences") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 10, t = 4;
        const Matrix a = testgen::random_psd(rng, n, n);
        const double u = eigenvalues(a).maxCoeff() + 0.5, delta = 0.2;
        const Matrix ua = upper_gradient(a, u, delta, t);
        CHECK(eigenvalues(ua).minCoeff() >= -1e-10);

        // ∇Φ^{u+δ}(A) = ((u+δ)I − A)^{-2} on the top-T eigenspace.
        const Vector y = testgen::gaussian(rng, n, 1);
        const Matrix yy = y * y.transpose();
        const double h = 1e-6;
        const double fd = (upper_potential(a + h * yy, u + delta, t) - upper_potential(a, u + delta, t)) / h;
        const auto dec = eigh(a);
        Matrix grad = Matrix::Zero(n, n);
        for (int i = n - t; i < n; ++i) {
            grad += dec.vectors.col(i) * dec.vectors.col(i).transpose() / std::pow(u + delta - dec.values(i), 2);
        }
        CHECK(fd == Approx(frobenius_dot(grad, yy)).epsilon(1e-4));

        const Subspace s = fixed_subspace(testgen::random_psd(rng, n, n), 3);
        const Matrix b = testgen::random_psd(rng, n, n);
        const double l = eigenvalues(restrict_to(b, s)).minCoeff() - 0.5;
        const Matrix lb = lower_gradient(b, l, 0.1, s);
        const Matrix perp = Matrix::Identity(n, n) - s.projection();
        CHECK(max_abs(perp * lb * perp) < 1e-10);
        CHECK(max_abs(perp * lb) < 1e-10);

        // d/dt Φ_{l+δ}(B + tZYZ) = −tr(P_S(B − (l+δ))P_S)^{†2} Y.
        const Vector yl = s.projection() * testgen::gaussian(rng, n, 1);
        const Matrix yly = yl * yl.transpose();
        const double fdl = (lower_potential(b + h * yly, l + 0.1, s) - lower_potential(b, l + 0.1, s)) / h;
        const Matrix shifted = s.projection() * (b - (l + 0.1) * Matrix::Identity(n, n)) * s.projection();
        const Matrix pinv = pseudoinverse(shifted);
        CHECK(fdl == Approx(-frobenius_dot(pinv * pinv, yly)).epsilon(1e-4));
    }
}

TEST_CASE("degenerate upper gradient is reported") {
    CHECK_THROWS_AS(upper_gradient(Matrix::Zero(1, 1), 1e20, 1e-20, 1), DegenerateGradient);
}

TEST_CASE("problem validation") {
    std::mt19937_64 rng(10);
    auto p = testgen::random_engine_problem(rng, 6, 10, 1, 9);
    CHECK_NOTHROW(p.validate());
    try {
        testgen::random_engine_problem(rng, 6, 10, 1, 8);
        FAIL("expected BudgetTooSmall");
    } catch (const BudgetTooSmall& e) {
        CHECK(std::string(e.what()).find("N > 8k") != std::string::npos);
    }
    auto bad = p;
    bad.costs[0] += 0.1;
    CHECK_THROWS_AS(bad.validate(), PreconditionError);
    bad = p;
    bad.mstar *= 2;
    CHECK_THROWS_AS(bad.validate(), PreconditionError);
    bad = p;
    bad.x(0, 0) += 1e-3;
    CHECK_THROWS_AS(bad.validate(), PreconditionError);
}

TEST_CASE("selection on a random instance") {
    std::mt19937_64 rng(12);
    const auto p = testgen::random_engine_problem(rng, 12, 60, 2, 17);
    const auto sched = init_schedule(p.k, p.budget, p.trace_bound);
    const auto s = fixed_subspace(p.x, p.k);
    auto zm = compute_z(p.x, p.mstar, s);
    const auto state = EngineState::initial(p, sched, s, zm.z);
    const Selection sel = select_update(p, state, sched);
    CHECK(sel.step == Approx(1.0 / sel.lower_score));
    CHECK(sel.lower_score >= sel.upper_score + sched.scale * p.costs[sel.index] - 1e-12);
    CHECK(sel.step * p.costs[sel.index] <= 1.0 / sched.scale + 1e-12);

    // Σ_i (U_A•Yᵢ + max(N,T)costᵢ) ≤ Σ_i L_B•(ZYᵢZ)
    const Matrix ua = upper_gradient(state.a, state.u, sched.delta_upper, p.trace_bound);
    const Matrix lb = lower_gradient(state.b, state.l, sched.delta_lower, s);
    double lhs = 0, rhs = 0;
    for (Eigen::Index i = 0; i < p.num_updates(); ++i) {
        const Vector v = p.updates.col(i);
        const Vector zv = state.z * v;
        lhs += v.dot(ua * v) + sched.scale * p.costs[i];
        rhs += zv.dot(lb * zv);
    }
    CHECK(lhs <= rhs + 1e-8);
}

TEST_CASE("single candidate is selected") {
    // X = 0 on R¹, one update v = 1, k = 0.
    const auto p = EngineProblem::from_updates(Matrix::Zero(1, 1), Matrix::Ones(1, 1), {1.0}, 0, 3);
    const auto sched = init_schedule(0, 3, 1);
    const auto state = EngineState::initial(p, sched, Subspace::zero(1), Matrix::Zero(1, 1));
    CHECK(select_update(p, state, sched).index == 0);
}

TEST_CASE("engine example: X = I/2 on R⁴") {
    Matrix updates = Matrix::Identity(4, 4) / std::sqrt(2.0);
    const auto p = EngineProblem::from_updates(Matrix::Identity(4, 4) / 2, updates, {0.25, 0.25, 0.25, 0.25}, 0, 4);
    CHECK(p.trace_bound == 2);
    const auto r = run_engine(p);
    CHECK(r.theta_max == Approx(4.0));
    CHECK(r.lambda_max <= r.theta_max);
    CHECK(r.lambda_max <= 5.0);
    CHECK(r.lambda_star == Approx(0.5));
    CHECK(r.lambda_min >= r.certified_lower - 1e-12);
    CHECK(r.lambda_min >= r.certified_lower_explicit - 1e-12);
    CHECK(r.total_cost <= 1.0 + 1e-12);
    CHECK(r.support <= 4);
    CHECK(r.monotonicity_violations == 0);
}

TEST_CASE("engine invariants on random instances") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 6; ++trial) {
        const int k = trial % 3;
        const int budget = 8 * k + 1 + trial;
        const auto p = testgen::random_engine_problem(rng, 15, 60, k, budget);
        const auto r = run_engine(p, trial % 2 ? Execution::Serial : Execution::Parallel);
        const auto& sched = r.schedule;
        CHECK(static_cast<int>(r.trace.size()) == budget);
        CHECK(r.support <= budget);
        CHECK(r.monotonicity_violations == 0);
        CHECK(r.lambda_max <= r.theta_max + 1e-9);
        CHECK(r.lambda_max <= 5.0);
        CHECK(r.restricted_lower >= r.theta_min - 1e-9);
        CHECK(r.lambda_min >= r.certified_lower - 1e-9);
        CHECK(r.lambda_min >= r.certified_lower_explicit - 1e-9);
        CHECK(r.total_cost <= std::min(1.0, double(budget) / p.trace_bound) + 1e-9);
        for (const auto& s : r.trace) {
            CHECK(s.total_cost <= (s.step + 1.0) / sched.scale + 1e-9);
            CHECK(s.upper_after <= sched.eps_upper + 1e-9);
            CHECK(s.lower_after <= sched.eps_lower + 1e-9);
        }
        // A = X + Σ wᵢ vᵢvᵢᵀ
        Matrix a = p.x;
        for (Eigen::Index i = 0; i < p.num_updates(); ++i) a += r.weights[i] * p.updates.col(i) * p.updates.col(i).transpose();
        CHECK(max_abs(a - r.m) < 1e-8);
    }
}

TEST_CASE("engine is deterministic and execution-independent") {
    std::mt19937_64 rng(30);
    const auto p = testgen::random_engine_problem(rng, 12, 40, 1, 9);
    const auto a = run_engine(p, Execution::Serial);
    const auto b = run_engine(p, Execution::Parallel);
    const auto c = run_engine(p, Execution::Parallel);
    CHECK(a.weights == b.weights);
    CHECK(b.weights == c.weights);
}

TEST_CASE("engine with unreachable directions in S") {
    // X has a zero eigenvalue whose eigenvector no update touches.
    Matrix x = Matrix::Zero(3, 3);
    x(1, 1) = 0.3;
    x(2, 2) = 0.5;
    Matrix v = Matrix::Zero(3, 2);
    v(1, 0) = 0.5;
    v(2, 1) = 0.5;
    const auto p = EngineProblem::from_updates(x, v, {0.5, 0.5}, 1, 9);
    const auto r = run_engine(p);
    CHECK(r.lower_dim == 0);
    CHECK(r.lambda_min == Approx(0.0));
    CHECK(r.lambda_min >= r.certified_lower - 1e-12);
    CHECK(r.monotonicity_violations == 0);
}
