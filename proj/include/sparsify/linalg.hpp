#pragma once

// Dense symmetric linear algebra shared by every module: eigendecomposition,
// pseudoinverses, subspaces and matrix pencils. Everything is dense; the
// intended scale is a few hundred rows.

#include <Eigen/Dense>

namespace sparsify {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative threshold below which an eigenvalue counts as zero.
inline constexpr double kRankTol = 1e-10;

/// Eigenvalues in ascending order; column i of `vectors` belongs to values(i).
struct SpectralDecomposition {
    Vector values;
    Matrix vectors;

    Eigen::Index size() const { return values.size(); }
    Matrix reconstruct() const;
    /// Largest |λ|, or 0 for an empty matrix.
    double spectral_radius() const;
    /// Number of eigenvalues above rel_tol · λ_max.
    Eigen::Index rank(double rel_tol = kRankTol) const;
    /// V f(Λ) Vᵀ with f applied to every eigenvalue.
    template <class F>
    Matrix apply(F&& f) const {
        Vector mapped = values.unaryExpr(f);
        return vectors * mapped.asDiagonal() * vectors.transpose();
    }
};

/// Throws NonConvergence when the QL iteration does not converge.
SpectralDecomposition eigh(const Matrix& a);
Vector eigenvalues(const Matrix& a);

/// Orthonormal basis Q (n×d); the projection onto the span is QQᵀ.
class Subspace {
public:
    /// Validates QᵀQ = I within 1e-10.
    explicit Subspace(Matrix basis);
    static Subspace full(Eigen::Index n);
    static Subspace zero(Eigen::Index n);

    Eigen::Index ambient_dim() const { return basis_.rows(); }
    Eigen::Index dim() const { return basis_.cols(); }
    const Matrix& basis() const { return basis_; }
    Matrix projection() const { return basis_ * basis_.transpose(); }

private:
    Matrix basis_;
};

/// Span of the eigenvectors whose eigenvalue exceeds rel_tol · λ_max.
Subspace image(const Matrix& a, double rel_tol = kRankTol);

/// Moore-Penrose pseudoinverse of a symmetric PSD matrix.
Matrix pseudoinverse(const Matrix& a, double rel_tol = kRankTol);
/// (A†)^{1/2}.
Matrix pseudoinverse_sqrt(const Matrix& a, double rel_tol = kRankTol);
/// Principal square root of a PSD matrix (negative rounding noise clamped).
Matrix psd_sqrt(const Matrix& a);

/// (A + PvvᵀP)† from A†, where P projects onto im(A).
/// Throws SingularUpdate when 1 + A†•vvᵀ is within 1e-12 of zero.
Matrix sm_pinv_update(const Matrix& a_dag, const Matrix& projection, const Vector& v);

/// QᵀAQ for an orthonormal basis Q of S.
Matrix restrict_to(const Matrix& a, const Subspace& s);

/// Generalized eigenvalues of the pencil (A, B) on im(B), ascending:
/// the spectrum of (B†)^{1/2} A (B†)^{1/2} restricted to the image.
/// Throws IncompatibleKernels unless im(A) = im(B).
Vector pencil_eigenvalues(const Matrix& a, const Matrix& b);
/// Same spectrum over im(B) without requiring im(A) = im(B); A may be
/// singular on part of im(B), which then shows up as zero eigenvalues.
Vector pencil_eigenvalues_on_image(const Matrix& a, const Matrix& b);

/// Tightest (lower, upper) with lower·B ⪯ A ⪯ upper·B on the common image.
struct PencilRange {
    double lower = 1.0;
    double upper = 1.0;
    double condition_number() const { return upper / lower; }
};
PencilRange pencil_range(const Matrix& a, const Matrix& b);
PencilRange range_of(const Vector& ascending);

/// κ(A, B) = max xᵀAx/xᵀBx · max xᵀBx/xᵀAx over the common image.
double relative_condition_number(const Matrix& a, const Matrix& b);

double frobenius_dot(const Matrix& a, const Matrix& b);
double max_abs(const Matrix& a);
double symmetry_error(const Matrix& a);
void symmetrize(Matrix& a);

}  // namespace sparsify
