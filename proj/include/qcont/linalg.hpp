#pragma once

// Dense complex Hermitian linear algebra. Every operator in the library
// (states, Hamiltonians, projectors, coupling contractions) is stored as a
// dense Eigen matrix; spectra come from the cyclic Jacobi solver below.

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace qcont {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Eigenvalues with |λ| <= kZeroThreshold * max|λ| are treated as exact zeros
/// by support projections, pseudo-inverses and entropy sums.
inline constexpr double kZeroThreshold = 1e-12;

struct Spectrum {
  RealVector eigenvalues;  // non-increasing, ties in solver order
  Matrix eigenvectors;     // column k belongs to eigenvalues[k]
  double residual = 0.0;   // max-abs entry of A - U diag(λ) U^†
  int sweeps = 0;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  double max_abs_eigenvalue() const;
  double zero_threshold() const { return kZeroThreshold * max_abs_eigenvalue(); }
};

struct JacobiOptions {
  int max_sweeps = 100;
  // Converged once the off-diagonal Frobenius mass drops below
  // tolerance * ||A||_F.
  double tolerance = 1e-14;
};

/// Full spectral decomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations in fixed (p, q) row order. Rows and columns that are already
/// decoupled (all off-diagonal entries exactly zero) are deflated before the
/// sweeps start, so states supported on a few basis vectors of a large space
/// stay cheap. Eigenvector phases are fixed so that the largest-magnitude
/// component of each column is real and positive.
///
/// Throws ConvergenceError when the sweep cap is reached or the
/// reconstruction residual exceeds 1e-10 * (1 + ||A||_max).
Spectrum eig_hermitian(const Matrix& a, const JacobiOptions& options = {});

/// (A + A^†) / 2.
Matrix hermitian_part(const Matrix& a);

/// Immutable Hermitian matrix together with its spectral decomposition,
/// computed once on construction.
class HermitianOperator {
 public:
  HermitianOperator();
  /// Symmetrizes `entries` and diagonalizes it.
  explicit HermitianOperator(const Matrix& entries);

  /// Rebuilds the matrix from a given decomposition (eigenvalues are re-sorted).
  static HermitianOperator from_spectrum(RealVector eigenvalues, Matrix eigenvectors);
  static HermitianOperator identity(int dim);
  static HermitianOperator diagonal(const RealVector& entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }
  const Spectrum& spectrum() const { return spectrum_; }
  const RealVector& eigenvalues() const { return spectrum_.eigenvalues; }
  const Matrix& eigenvectors() const { return spectrum_.eigenvectors; }
  double trace() const { return entries_.trace().real(); }

 private:
  HermitianOperator(Matrix entries, Spectrum spectrum);

  Matrix entries_;
  Spectrum spectrum_;
};

enum class SupportMode {
  full,          // f applied to every eigenvalue
  support_only,  // eigenvalues at/below the zero threshold map to 0
};

using ScalarFunction = std::function<double(double)>;

/// U f(Λ) U^†. Throws DomainError naming the eigenvalue if f is not finite
/// at a retained eigenvalue.
HermitianOperator matrix_function(const HermitianOperator& op, const ScalarFunction& f,
                                  SupportMode mode = SupportMode::full);

/// Same as matrix_function but returns the bare matrix (no re-diagonalization).
Matrix apply_function(const Spectrum& spectrum, const ScalarFunction& f,
                      SupportMode mode = SupportMode::full);

Matrix sqrt_psd(const HermitianOperator& op);
/// Pseudo-inverse square root on the support.
Matrix inverse_sqrt_on_support(const HermitianOperator& op);
/// Orthogonal projector onto the eigenvectors with |eigenvalue| above the
/// zero threshold.
Matrix support_projector(const HermitianOperator& op);

double trace_norm(const HermitianOperator& op);
double operator_norm(const HermitianOperator& op);
/// Σ_{λ>0} λ v v^†.
HermitianOperator positive_part(const HermitianOperator& op);

/// ||√ρ √σ||_1 = tr sqrt(√σ ρ √σ).
double fidelity(const HermitianOperator& rho, const HermitianOperator& sigma);

double smallest_eigenvalue(const Matrix& hermitian);
double largest_eigenvalue(const Matrix& hermitian);
double max_abs(const Matrix& m);
Matrix kron(const Matrix& a, const Matrix& b);

/// Row-major vectorization: v[i * cols + j] = m(i, j). With this convention
/// (A ⊗ B)|Φ⟩ = vec(A B^T) for |Φ⟩ = Σ_i |i⟩|i⟩.
Vector vec_row_major(const Matrix& m);
Matrix unvec_row_major(const Vector& v, int rows, int cols);

}  // namespace qcont
