#pragma once

// Two-subspace barrier process. Starting from A = X it adds N rank-one
// increments t·vᵢvᵢᵀ, choosing each so that an upper potential over the T
// largest eigenvalues of A and a lower potential over a fixed k-dimensional
// eigenspace S of X never increase while both barriers move outward.

#include <limits>
#include <vector>

#include "sparsify/kernels.hpp"
#include "sparsify/linalg.hpp"

namespace sparsify {

/// X + Σ vᵢvᵢᵀ = M* with λ_max(M*) ≤ 1, Σ costᵢ = 1 and N > 8k.
struct EngineProblem {
    Matrix x;
    Matrix updates;  ///< column i is vᵢ, so Yᵢ = vᵢvᵢᵀ
    std::vector<double> costs;
    Matrix mstar;
    int k = 0;
    int budget = 0;       ///< N
    int trace_bound = 1;  ///< T = ⌈Tr(M* − X)⌉

    /// Fills M* = X + VVᵀ and T from the updates, then validates.
    static EngineProblem from_updates(Matrix x, Matrix updates, std::vector<double> costs, int k, int budget);

    Eigen::Index dim() const { return x.rows(); }
    Eigen::Index num_updates() const { return updates.cols(); }

    /// Throws BudgetTooSmall, InvalidK or PreconditionError.
    void validate() const;
};

/// ⌈tr⌉ with a 1e-9 allowance for rounding, never below 1.
int trace_ceiling(double trace);

struct EngineSchedule {
    double delta_lower = 0;
    double delta_upper = 0;
    double eps_lower = 0;
    double eps_upper = 0;
    double l0 = 0;
    double u0 = 0;
    int scale = 1;  ///< max(N, T)
};

/// Throws BudgetTooSmall when N ≤ 8k.
EngineSchedule init_schedule(int k, int budget, int trace_bound);

/// Eigenvectors of X for its k smallest eigenvalues, in decomposition order.
/// k may equal n, in which case S is the whole space.
Subspace fixed_subspace(const Matrix& x, int k);

struct ZMatrix {
    Matrix z;
    double perturbation = 0.0;  ///< ε added to P_S(M* − X)P_S, 0 when none was needed
};

/// Z = ((P_S (M* − X) P_S)†)^{1/2}. When the restriction is singular on S,
/// ε·P_S with ε = 1e-8·λ_max(M* − X) is added first.
ZMatrix compute_z(const Matrix& x, const Matrix& mstar, const Subspace& s);

/// Σ 1/(λᵢ(B|_S) − l). Throws BarrierViolation when some λᵢ ≤ l.
double lower_potential(const Matrix& b, double l, const Subspace& s);
/// Σ over the T largest eigenvalues of 1/(u − λᵢ(A)). Throws BarrierViolation when λ_max ≥ u.
double upper_potential(const Matrix& a, double u, int t);

/// U_A = ((u+δ)I − A)^{-2}/(Φ^u(A) − Φ^{u+δ}(A)) + ((u+δ)I − A)^{-1}.
Matrix upper_gradient(const Matrix& a, double u, double delta, int t);
/// L_B = (P_S(B − (l+δ)I)P_S)^{†2}/(Φ_{l+δ}(B) − Φ_l(B)) − (P_S(B − (l+δ)I)P_S)^†.
Matrix lower_gradient(const Matrix& b, double l, double delta, const Subspace& s);

struct EngineState {
    int step = 0;
    std::vector<double> weights;
    Matrix a;
    Matrix b;
    double l = 0;
    double u = 0;
    Subspace s;      ///< lower-barrier subspace
    Matrix z;
    Matrix z_updates;  ///< Z vᵢ, fixed for the run

    /// A = X, B = 0, barriers at (l₀, u₀).
    static EngineState initial(const EngineProblem& p, const EngineSchedule& sched, Subspace s, Matrix z);
};

struct Selection {
    int index = -1;
    double step = 0;          ///< t
    double upper_score = 0;   ///< U_A • Yᵢ
    double lower_score = 0;   ///< L_B • (Z Yᵢ Z)
    double slack = 0;
};

/// Picks the feasible i with the largest L_B•(ZYᵢZ) − U_A•Yᵢ − max(N,T)·costᵢ
/// (lowest index on ties) and t = 1/(L_B•(ZYᵢZ)). With an empty lower
/// subspace the lower condition is vacuous: t = 1/(U_A•Yᵢ + max(N,T)·costᵢ)
/// and the index with the largest trace gain t·‖vᵢ‖² wins.
/// Throws InfeasibleStep when nothing qualifies.
Selection select_update(const EngineProblem& p, const EngineState& state, const EngineSchedule& sched,
                        Execution exec = Execution::Parallel);

struct StepTrace {
    int step = 0;
    int index = 0;
    double t = 0;
    double l = 0;                 ///< barrier before the step
    double u = 0;
    double upper_before = 0;      ///< Φ^u(A^(q))
    double lower_before = 0;      ///< Φ_l(B^(q))
    double upper_after = 0;       ///< Φ^{u+δ_U}(A^(q+1))
    double lower_after = 0;       ///< Φ_{l+δ_L}(B^(q+1))
    double total_cost = 0;
};

struct EngineResult {
    std::vector<double> weights;
    Matrix m;
    double theta_min = 0;
    double theta_max = 0;
    double lambda_min = 0;  ///< λ_min(M)
    double lambda_max = 0;  ///< λ_max(M)
    double restricted_lower = std::numeric_limits<double>::infinity();  ///< λ_min(B^(N)|_S)
    double total_cost = 0;
    double lambda_star = 0;     ///< λ_{k+1}(X), +∞ when k = dim
    double mstar_lambda_min = 0;
    /// θ_min λ* λ_min(M*) / (√λ* + √θ_max + √(θ_min λ_min(M*)))².
    double certified_lower = 0;
    /// min(N/T, 1)·λ*·λ_min(M*)/72, the explicit-constant form (λ* capped at 1).
    double certified_lower_explicit = 0;
    int support = 0;
    int lower_dim = 0;  ///< dimension of the subspace carrying the lower barrier
    double perturbation = 0;
    int monotonicity_violations = 0;
    double max_potential_increase = -std::numeric_limits<double>::infinity();
    EngineSchedule schedule;
    std::vector<StepTrace> trace;
};

/// Runs exactly N steps. Propagates InfeasibleStep and BarrierViolation.
EngineResult run_engine(const EngineProblem& p, Execution exec = Execution::Parallel);

/// Lower bound on λ_min(M) from the final barrier positions.
double analytic_lower_bound(double theta_min, double theta_max, double lambda_star, double mstar_lambda_min);

inline constexpr double kExplicitLowerConstant = 1.0 / 72.0;
inline constexpr double kExplicitUpperConstant = 5.0;

}  // namespace sparsify
