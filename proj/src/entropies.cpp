#include "qcont/entropies.hpp"

#include <cmath>
#include <sstream>

#include "qcont/errors.hpp"

namespace qcont {

namespace {

double eta(double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; }

}  // namespace

double entropy_of_spectrum(const RealVector& eigenvalues) {
  if (eigenvalues.size() == 0) return 0.0;
  const double threshold = kZeroThreshold * eigenvalues.cwiseAbs().maxCoeff();
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    if (eigenvalues[i] > threshold) s += eta(eigenvalues[i]);
  }
  return s;
}

double von_neumann_entropy(const DensityOperator& rho) {
  return entropy_of_spectrum(rho.eigenvalues());
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream msg;
    msg << "binary_entropy: argument " << x << " outside [0, 1]";
    throw DomainError(msg.str());
  }
  return eta(x) + eta(1.0 - x);
}

double clipped_binary(double x) {
  if (!(x >= 0.0)) throw DomainError("clipped_binary: negative argument");
  return x <= 0.5 ? binary_entropy(x) : 1.0;
}

double conditional_entropy(const BipartiteState& state) {
  const Matrix b = partial_trace(state.matrix(), state.dim_a(), state.dim_b(), Subsystem::B);
  return von_neumann_entropy(state.state()) - entropy_of_spectrum(eig_hermitian(b).eigenvalues);
}

double relative_entropy(const DensityOperator& rho, const HermitianOperator& gamma) {
  if (rho.dim() != gamma.dim()) throw DomainError("relative_entropy: dimension mismatch");
  const Spectrum& gs = gamma.spectrum();
  if (gs.eigenvalues[gs.dim() - 1] < -1e-10 * std::max(1.0, gs.max_abs_eigenvalue())) {
    throw DomainError("relative_entropy: second argument is not positive semidefinite");
  }
  const double threshold = gs.zero_threshold();
  // Work in the eigenbasis of γ: only the diagonal of ρ there is needed.
  const Matrix rotated = gs.eigenvectors.adjoint() * rho.matrix() * gs.eigenvectors;
  double outside = 0.0;
  double cross = 0.0;  // tr ρ log2 γ
  for (int k = 0; k < gs.dim(); ++k) {
    const double weight = rotated(k, k).real();
    if (gs.eigenvalues[k] > threshold) {
      cross += weight * std::log2(gs.eigenvalues[k]);
    } else {
      outside += weight;
    }
  }
  if (outside > 1e-10) return kInfinity;
  return -von_neumann_entropy(rho) - cross;
}

double shannon_entropy(const RealVector& p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) s += eta(p[i]);
  return s;
}

double conditional_shannon(const Eigen::MatrixXd& joint) {
  const RealVector py = joint.colwise().sum().transpose();
  double h_xy = 0.0;
  for (Eigen::Index i = 0; i < joint.size(); ++i) h_xy += eta(joint.data()[i]);
  return h_xy - shannon_entropy(py);
}

double gibbs_entropy_g(double n) {
  if (!(n >= 0.0)) throw DomainError("gibbs_entropy_g: negative occupation number");
  if (n == 0.0) return 0.0;
  // log2(N+1) + N log2(1 + 1/N), free of the large-N cancellation.
  return std::log2(n + 1.0) + n * std::log1p(1.0 / n) * kLog2E;
}

}  // namespace qcont
