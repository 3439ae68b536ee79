#include "qcont/couplings.hpp"

#include <cmath>
#include <sstream>

#include "qcont/errors.hpp"

namespace qcont {

ClassicalCoupling maximal_classical_coupling(const ClassicalDistribution& p,
                                             const ClassicalDistribution& q) {
  if (p.size() != q.size()) throw DomainError("maximal_classical_coupling: length mismatch");
  const int d = p.size();
  ClassicalCoupling c{Eigen::MatrixXd::Zero(d, d), p.probs(), q.probs()};
  RealVector rp(d);
  RealVector rq(d);
  for (int x = 0; x < d; ++x) {
    const double m = std::min(p[x], q[x]);
    c.joint(x, x) = m;
    rp[x] = p[x] - m;
    rq[x] = q[x] - m;
  }
  const double eps = rp.sum();
  if (eps > 0.0) {
    // rp[x] * rq[x] = 0 for every x, so the diagonal is untouched.
    c.joint += rp * rq.transpose() / eps;
  }
  return c;
}

CouplingDecomposition build_decomposition(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw DomainError("build_decomposition: dimension mismatch");
  const HermitianOperator diff(Matrix(rho.matrix() - sigma.matrix()));
  const double eps = 0.5 * trace_norm(diff);
  if (eps < 1e-12) {
    const auto placeholder = DensityOperator::maximally_mixed(rho.dim());
    return CouplingDecomposition{0.0, placeholder, placeholder, rho, true};
  }
  const Matrix pos = positive_part(diff).matrix();
  const Matrix neg = pos - diff.matrix();
  return CouplingDecomposition{
      eps,
      DensityOperator(Matrix(pos / eps)),
      DensityOperator(Matrix(neg / eps)),
      DensityOperator(Matrix((sigma.matrix() + pos) / (1.0 + eps))),
      false,
  };
}

namespace {

void require_psd(const Matrix& residual, const char* what) {
  const double lowest = smallest_eigenvalue(residual);
  if (lowest < -1e-9) {
    std::ostringstream msg;
    msg << "quantum_coupling: " << what << " has eigenvalue " << lowest;
    throw InternalConsistencyError(msg.str());
  }
}

double pure_fidelity(const Vector& pure, const Matrix& state) {
  const double overlap = (pure.adjoint() * state * pure)(0, 0).real();
  return std::sqrt(std::max(overlap, 0.0));
}

}  // namespace

QuantumCoupling quantum_coupling(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw DomainError("quantum_coupling: dimension mismatch");
  const int d = rho.dim();
  const CouplingDecomposition dec = build_decomposition(rho, sigma);
  const PureBipartite phi = pretty_good_purification(rho);
  const PureBipartite psi = pretty_good_purification(sigma);

  if (dec.degenerate) {
    const Matrix proj = psi.projector();
    const double overlap = std::abs(psi.amplitudes.dot(phi.amplitudes));
    return QuantumCoupling{phi,
                           psi,
                           psi.amplitudes,
                           support_projector(rho.op()),
                           support_projector(HermitianOperator(Matrix(sigma.matrix().transpose()))),
                           DensityOperator(proj),
                           0.0,
                           true,
                           1.0,
                           overlap,
                           1.0,
                           overlap,
                           0.0};
  }

  const double eps = dec.epsilon;
  const double scale = 1.0 / std::sqrt(1.0 + eps);
  const Matrix root_rho = sqrt_psd(rho.op());
  const Matrix root_sigma = sqrt_psd(sigma.op());
  const Matrix x = scale * root_rho * inverse_sqrt_on_support(dec.omega.op());

  // Y is built from the transposed operators directly so the two routes to
  // ϑ stay independent.
  const HermitianOperator sigma_t(Matrix(sigma.matrix().transpose()));
  const HermitianOperator omega_t(Matrix(dec.omega.matrix().transpose()));
  const Matrix y = scale * sqrt_psd(sigma_t) * inverse_sqrt_on_support(omega_t);

  // (A ⊗ B)|Φ⟩ = vec(A B^T).
  const Vector vartheta = vec_row_major(x * root_sigma);
  const Vector vartheta_y = vec_row_major(root_rho * y.transpose());

  const double norm2 = vartheta.squaredNorm();
  const Matrix coeff = unvec_row_major(vartheta, d, d);
  const Matrix residual_1 = rho.matrix() - coeff * coeff.adjoint();
  const Matrix residual_2 = sigma_t.matrix() - coeff.transpose() * coeff.conjugate();
  require_psd(residual_1, "rho - vartheta^{A1}");
  require_psd(residual_2, "sigma^T - vartheta^{A2}");

  Matrix theta = vartheta * vartheta.adjoint();
  const double rest = 1.0 - norm2;
  if (rest > 1e-12) {
    theta += kron(residual_1, residual_2) / rest;
  } else {
    theta /= norm2;
  }
  const DensityOperator theta_state(theta);

  QuantumCoupling qc{phi,
                     psi,
                     vartheta,
                     x,
                     y,
                     theta_state,
                     eps,
                     false,
                     std::abs(psi.amplitudes.dot(vartheta)),
                     std::abs(phi.amplitudes.dot(vartheta)),
                     pure_fidelity(psi.amplitudes, theta_state.matrix()),
                     pure_fidelity(phi.amplitudes, theta_state.matrix()),
                     max_abs(Matrix(vartheta - vartheta_y))};
  return qc;
}

DiagonalCoupling diagonal_coupling_from_spectra(const RealVector& r, const Matrix& e,
                                                const RealVector& s, const Matrix& f) {
  const int d = static_cast<int>(r.size());
  if (s.size() != d || e.rows() != d || f.rows() != d) {
    throw DomainError("diagonal_coupling: dimension mismatch");
  }
  RealVector m(d);
  for (int i = 0; i < d; ++i) m[i] = std::max(0.0, std::min(r[i], s[i]));
  const Matrix coeff = e * m.cwiseSqrt().cast<Complex>().asDiagonal() * f.transpose();
  const Vector phi = vec_row_major(coeff);

  const Matrix rho = e * r.cast<Complex>().asDiagonal() * e.adjoint();
  const Matrix sigma = f * s.cast<Complex>().asDiagonal() * f.adjoint();
  const double eps = 1.0 - m.sum();
  Matrix omega = phi * phi.adjoint();
  if (eps > 1e-12) {
    const Matrix residual_1 = rho - coeff * coeff.adjoint();
    const Matrix residual_2 = sigma - coeff.transpose() * coeff.conjugate();
    omega += kron(residual_1, residual_2) / eps;
  } else {
    omega /= phi.squaredNorm();
  }
  DensityOperator omega_state(omega);
  const double top = omega_state.eigenvalues()[0];
  return DiagonalCoupling{std::move(omega_state), phi, 0.5 * (r - s).cwiseAbs().sum(), top};
}

DiagonalCoupling diagonal_coupling(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw DomainError("diagonal_coupling: dimension mismatch");
  return diagonal_coupling_from_spectra(rho.eigenvalues(), rho.spectrum().eigenvectors,
                                        sigma.eigenvalues(), sigma.spectrum().eigenvectors);
}

}  // namespace qcont
