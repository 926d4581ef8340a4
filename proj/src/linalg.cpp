#include "sparsify/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sparsify/errors.hpp"

namespace sparsify {

Matrix SpectralDecomposition::reconstruct() const {
    return vectors * values.asDiagonal() * vectors.transpose();
}

double SpectralDecomposition::spectral_radius() const {
    if (values.size() == 0) return 0.0;
    return std::max(std::abs(values(0)), std::abs(values(values.size() - 1)));
}

Eigen::Index SpectralDecomposition::rank(double rel_tol) const {
    if (values.size() == 0) return 0;
    const double top = values(values.size() - 1);
    if (top <= 0.0) return 0;
    return (values.array() > rel_tol * top).count();
}

SpectralDecomposition eigh(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw PreconditionError("eigh: matrix is not square");
    }
    if (a.rows() == 0) return {Vector(0), Matrix(0, 0)};
    // Only the lower triangle is read; average first so tiny asymmetries
    // from accumulated rank-one updates do not bias the result.
    Matrix sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw NonConvergence("eigh: symmetric QL iteration did not converge for an " +
                             std::to_string(a.rows()) + "x" + std::to_string(a.rows()) + " matrix");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

Vector eigenvalues(const Matrix& a) {
    if (a.rows() == 0) return Vector(0);
    Matrix sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NonConvergence("eigenvalues: symmetric QL iteration did not converge");
    }
    return solver.eigenvalues();
}

Subspace::Subspace(Matrix basis) : basis_(std::move(basis)) {
    if (basis_.cols() > basis_.rows()) {
        throw PreconditionError("Subspace: more basis vectors than ambient dimension");
    }
    if (basis_.cols() > 0) {
        const Matrix gram = basis_.transpose() * basis_;
        const double err = max_abs(gram - Matrix::Identity(gram.rows(), gram.cols()));
        if (err > 1e-10) {
            throw PreconditionError("Subspace: basis is not orthonormal (error " + std::to_string(err) + ")");
        }
    }
}

Subspace Subspace::full(Eigen::Index n) { return Subspace(Matrix::Identity(n, n)); }
Subspace Subspace::zero(Eigen::Index n) { return Subspace(Matrix(n, 0)); }

Subspace image(const Matrix& a, double rel_tol) {
    const auto dec = eigh(a);
    return Subspace(dec.vectors.rightCols(dec.rank(rel_tol)));
}

Matrix pseudoinverse(const Matrix& a, double rel_tol) {
    const auto dec = eigh(a);
    if (dec.size() == 0) return Matrix(0, 0);
    const double cutoff = rel_tol * std::max(0.0, dec.values(dec.size() - 1));
    Matrix out = dec.apply([cutoff](double x) { return x > cutoff ? 1.0 / x : 0.0; });
    symmetrize(out);
    return out;
}

Matrix pseudoinverse_sqrt(const Matrix& a, double rel_tol) {
    const auto dec = eigh(a);
    if (dec.size() == 0) return Matrix(0, 0);
    const double cutoff = rel_tol * std::max(0.0, dec.values(dec.size() - 1));
    Matrix out = dec.apply([cutoff](double x) { return x > cutoff ? 1.0 / std::sqrt(x) : 0.0; });
    symmetrize(out);
    return out;
}

Matrix psd_sqrt(const Matrix& a) {
    const auto dec = eigh(a);
    Matrix out = dec.apply([](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
    symmetrize(out);
    return out;
}

Matrix sm_pinv_update(const Matrix& a_dag, const Matrix& projection, const Vector& v) {
    const Vector pv = projection * v;
    const Vector adv = a_dag * pv;
    const double denom = 1.0 + pv.dot(adv);
    if (std::abs(denom) <= 1e-12) {
        throw SingularUpdate("sm_pinv_update: 1 + A†•vvᵀ vanishes");
    }
    Matrix out = a_dag - (adv * adv.transpose()) / denom;
    symmetrize(out);
    return out;
}

Matrix restrict_to(const Matrix& a, const Subspace& s) {
    Matrix out = s.basis().transpose() * a * s.basis();
    symmetrize(out);
    return out;
}

Vector pencil_eigenvalues(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw IncompatibleKernels("pencil: matrices differ in size");
    }
    const auto da = eigh(a);
    const auto db = eigh(b);
    const Eigen::Index ra = da.rank();
    const Eigen::Index rb = db.rank();
    if (ra != rb) {
        throw IncompatibleKernels("pencil: ranks differ (" + std::to_string(ra) + " vs " +
                                  std::to_string(rb) + ")");
    }
    const Matrix qa = da.vectors.rightCols(ra);
    const Matrix qb = db.vectors.rightCols(rb);
    const double mismatch = max_abs(qa * qa.transpose() - qb * qb.transpose());
    if (mismatch > 1e-7) {
        throw IncompatibleKernels("pencil: images differ (projection mismatch " +
                                  std::to_string(mismatch) + ")");
    }
    if (rb == 0) return Vector(0);
    const Vector inv_sqrt = db.values.tail(rb).cwiseSqrt().cwiseInverse();
    const Matrix c = inv_sqrt.asDiagonal() * (qb.transpose() * a * qb) * inv_sqrt.asDiagonal();
    return eigenvalues(c);
}

Vector pencil_eigenvalues_on_image(const Matrix& a, const Matrix& b) {
    const auto db = eigh(b);
    const Eigen::Index rb = db.rank();
    if (rb == 0) return Vector(0);
    const Matrix qb = db.vectors.rightCols(rb);
    const Vector inv_sqrt = db.values.tail(rb).cwiseSqrt().cwiseInverse();
    const Matrix c = inv_sqrt.asDiagonal() * (qb.transpose() * a * qb) * inv_sqrt.asDiagonal();
    return eigenvalues(c);
}

PencilRange range_of(const Vector& ascending) {
    if (ascending.size() == 0) return {};
    return {ascending(0), ascending(ascending.size() - 1)};
}

PencilRange pencil_range(const Matrix& a, const Matrix& b) { return range_of(pencil_eigenvalues(a, b)); }

double relative_condition_number(const Matrix& a, const Matrix& b) {
    return pencil_range(a, b).condition_number();
}

double frobenius_dot(const Matrix& a, const Matrix& b) { return (a.array() * b.array()).sum(); }

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double symmetry_error(const Matrix& a) { return max_abs(a - a.transpose()); }

void symmetrize(Matrix& a) { a = 0.5 * (a + a.transpose()).eval(); }

}  // namespace sparsify
