#include "qcont/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "qcont/errors.hpp"

namespace qcont {

namespace {

double off_diagonal_frobenius(const Matrix& a) {
  const Eigen::Index n = a.rows();
  double sum = 0.0;
  for (Eigen::Index q = 0; q < n; ++q) {
    for (Eigen::Index p = 0; p < n; ++p) {
      if (p != q) sum += std::norm(a(p, q));
    }
  }
  return std::sqrt(sum);
}

// One complex Jacobi rotation annihilating a(p, q). The rotation is the
// real symmetric Jacobi rotation conjugated by diag(1, e^{-iφ}) where φ is
// the phase of a(p, q).
void rotate(Matrix& a, Matrix& v, Eigen::Index p, Eigen::Index q) {
  const Complex apq = a(p, q);
  const double b = std::abs(apq);
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const Complex phase = apq / b;
  const Complex w = std::conj(phase);

  const double theta = (aqq - app) / (2.0 * b);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    const Complex new_kp = c * akp - s * w * akq;
    const Complex new_kq = s * akp + c * w * akq;
    a(k, p) = new_kp;
    a(k, q) = new_kq;
    a(p, k) = std::conj(new_kp);
    a(q, k) = std::conj(new_kq);
  }
  a(p, p) = app - t * b;
  a(q, q) = aqq + t * b;
  a(p, q) = 0.0;
  a(q, p) = 0.0;

  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = c * vkp - s * w * vkq;
    v(k, q) = s * vkp + c * w * vkq;
  }
}

void fix_phases(Matrix& vectors) {
  for (Eigen::Index col = 0; col < vectors.cols(); ++col) {
    Eigen::Index best = 0;
    double best_mag = -1.0;
    for (Eigen::Index row = 0; row < vectors.rows(); ++row) {
      // Strict comparison with a small margin keeps the pick stable against
      // roundoff-level differences between equal-magnitude components.
      const double mag = std::abs(vectors(row, col));
      if (mag > best_mag * (1.0 + 1e-9) + 1e-300) {
        best_mag = mag;
        best = row;
      }
    }
    if (best_mag <= 0.0) continue;
    const Complex ref = vectors(best, col);
    vectors.col(col) *= std::conj(ref) / std::abs(ref);
    vectors(best, col) = Complex(vectors(best, col).real(), 0.0);
  }
}

}  // namespace

double Spectrum::max_abs_eigenvalue() const {
  return eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
}

Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

Spectrum eig_hermitian(const Matrix& input, const JacobiOptions& options) {
  if (input.rows() != input.cols()) {
    throw DomainError("eig_hermitian: matrix is not square");
  }
  const Eigen::Index n = input.rows();
  Spectrum result;
  if (n == 0) return result;

  // Deflate rows that are already decoupled.
  std::vector<Eigen::Index> active;
  std::vector<Eigen::Index> decoupled;
  for (Eigen::Index i = 0; i < n; ++i) {
    bool coupled = false;
    for (Eigen::Index j = 0; j < n && !coupled; ++j) {
      if (j != i && (input(i, j) != 0.0 || input(j, i) != 0.0)) coupled = true;
    }
    (coupled ? active : decoupled).push_back(i);
  }

  const Eigen::Index m = static_cast<Eigen::Index>(active.size());
  Matrix a(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      a(i, j) = 0.5 * (input(active[i], active[j]) + std::conj(input(active[j], active[i])));
    }
  }
  Matrix v = Matrix::Identity(m, m);

  const double norm_f = a.norm();
  int sweep = 0;
  bool converged = (m == 0) || norm_f == 0.0;
  while (!converged && sweep < options.max_sweeps) {
    if (off_diagonal_frobenius(a) <= options.tolerance * norm_f) {
      converged = true;
      break;
    }
    for (Eigen::Index p = 0; p + 1 < m; ++p) {
      for (Eigen::Index q = p + 1; q < m; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag == 0.0) continue;
        if (mag < 1e-18 * norm_f) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        rotate(a, v, p, q);
      }
    }
    ++sweep;
  }
  if (!converged && off_diagonal_frobenius(a) <= options.tolerance * norm_f) converged = true;
  if (!converged) {
    throw ConvergenceError("eig_hermitian: no convergence after " +
                               std::to_string(options.max_sweeps) + " sweeps",
                           off_diagonal_frobenius(a));
  }

  std::vector<double> values(n);
  Matrix vectors = Matrix::Zero(n, n);
  Eigen::Index col = 0;
  // Columns are laid out in original index order so ties resolve by index.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> order;  // (original index, slot)
  for (Eigen::Index i = 0; i < m; ++i) order.emplace_back(active[i], i);
  for (Eigen::Index i : decoupled) order.emplace_back(i, -1);
  std::sort(order.begin(), order.end());
  for (const auto& [orig, slot] : order) {
    if (slot >= 0) {
      values[col] = a(slot, slot).real();
      for (Eigen::Index r = 0; r < m; ++r) vectors(active[r], col) = v(r, slot);
    } else {
      values[col] = input(orig, orig).real();
      vectors(orig, col) = 1.0;
    }
    ++col;
  }

  std::vector<Eigen::Index> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return values[x] > values[y]; });
  result.eigenvalues.resize(n);
  result.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    result.eigenvalues[k] = values[perm[k]];
    result.eigenvectors.col(k) = vectors.col(perm[k]);
  }
  fix_phases(result.eigenvectors);
  result.sweeps = sweep;

  const Matrix herm = hermitian_part(input);
  const Matrix recon = result.eigenvectors * result.eigenvalues.cast<Complex>().asDiagonal() *
                       result.eigenvectors.adjoint();
  result.residual = max_abs(herm - recon);
  if (result.residual > 1e-10 * (1.0 + max_abs(herm))) {
    throw ConvergenceError("eig_hermitian: reconstruction residual too large", result.residual);
  }
  return result;
}

HermitianOperator::HermitianOperator() : HermitianOperator(Matrix::Zero(1, 1)) {}

HermitianOperator::HermitianOperator(const Matrix& entries)
    : entries_(hermitian_part(entries)), spectrum_(eig_hermitian(entries_)) {}

HermitianOperator::HermitianOperator(Matrix entries, Spectrum spectrum)
    : entries_(std::move(entries)), spectrum_(std::move(spectrum)) {}

HermitianOperator HermitianOperator::from_spectrum(RealVector eigenvalues, Matrix eigenvectors) {
  const Eigen::Index n = eigenvalues.size();
  std::vector<Eigen::Index> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](Eigen::Index x, Eigen::Index y) {
    return eigenvalues[x] > eigenvalues[y];
  });
  Spectrum s;
  s.eigenvalues.resize(n);
  s.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    s.eigenvalues[k] = eigenvalues[perm[k]];
    s.eigenvectors.col(k) = eigenvectors.col(perm[k]);
  }
  Matrix entries =
      hermitian_part(s.eigenvectors * s.eigenvalues.cast<Complex>().asDiagonal() *
                     s.eigenvectors.adjoint());
  return HermitianOperator(std::move(entries), std::move(s));
}

HermitianOperator HermitianOperator::identity(int dim) {
  return diagonal(RealVector::Ones(dim));
}

HermitianOperator HermitianOperator::diagonal(const RealVector& entries) {
  return from_spectrum(entries, Matrix::Identity(entries.size(), entries.size()));
}

namespace {

RealVector map_eigenvalues(const Spectrum& spectrum, const ScalarFunction& f, SupportMode mode) {
  const double threshold = spectrum.zero_threshold();
  const int n = spectrum.dim();
  RealVector mapped(n);
  for (int k = 0; k < n; ++k) {
    const double lambda = spectrum.eigenvalues[k];
    if (mode == SupportMode::support_only && lambda <= threshold) {
      mapped[k] = 0.0;
      continue;
    }
    const double value = f(lambda);
    if (!std::isfinite(value)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "matrix_function: function undefined at eigenvalue " << lambda;
      throw DomainError(msg.str());
    }
    mapped[k] = value;
  }
  return mapped;
}

}  // namespace

Matrix apply_function(const Spectrum& spectrum, const ScalarFunction& f, SupportMode mode) {
  const RealVector mapped = map_eigenvalues(spectrum, f, mode);
  return spectrum.eigenvectors * mapped.cast<Complex>().asDiagonal() *
         spectrum.eigenvectors.adjoint();
}

HermitianOperator matrix_function(const HermitianOperator& op, const ScalarFunction& f,
                                  SupportMode mode) {
  return HermitianOperator::from_spectrum(map_eigenvalues(op.spectrum(), f, mode),
                                          op.eigenvectors());
}

Matrix sqrt_psd(const HermitianOperator& op) {
  return apply_function(op.spectrum(), [](double x) { return std::sqrt(std::max(x, 0.0)); },
                        SupportMode::support_only);
}

Matrix inverse_sqrt_on_support(const HermitianOperator& op) {
  return apply_function(op.spectrum(), [](double x) { return 1.0 / std::sqrt(x); },
                        SupportMode::support_only);
}

Matrix support_projector(const HermitianOperator& op) {
  const double threshold = op.spectrum().zero_threshold();
  return apply_function(op.spectrum(), [threshold](double x) { return std::abs(x) > threshold ? 1.0 : 0.0; });
}

double trace_norm(const HermitianOperator& op) { return op.eigenvalues().cwiseAbs().sum(); }

double operator_norm(const HermitianOperator& op) { return op.spectrum().max_abs_eigenvalue(); }

HermitianOperator positive_part(const HermitianOperator& op) {
  RealVector values = op.eigenvalues().cwiseMax(0.0);
  return HermitianOperator::from_spectrum(values, op.eigenvectors());
}

double fidelity(const HermitianOperator& rho, const HermitianOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw DomainError("fidelity: dimension mismatch");
  const Matrix root_sigma = sqrt_psd(sigma);
  const Spectrum s = eig_hermitian(hermitian_part(root_sigma * rho.matrix() * root_sigma));
  double sum = 0.0;
  for (int k = 0; k < s.dim(); ++k) sum += std::sqrt(std::max(s.eigenvalues[k], 0.0));
  return sum;
}

double smallest_eigenvalue(const Matrix& hermitian) {
  const Spectrum s = eig_hermitian(hermitian);
  return s.dim() == 0 ? 0.0 : s.eigenvalues[s.dim() - 1];
}

double largest_eigenvalue(const Matrix& hermitian) {
  const Spectrum s = eig_hermitian(hermitian);
  return s.dim() == 0 ? 0.0 : s.eigenvalues[0];
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector vec_row_major(const Matrix& m) {
  Vector v(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) v[i * m.cols() + j] = m(i, j);
  }
  return v;
}

Matrix unvec_row_major(const Vector& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols) {
    throw DomainError("unvec_row_major: size mismatch");
  }
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = v[static_cast<Eigen::Index>(i) * cols + j];
  }
  return m;
}

}  // namespace qcont
