#pragma once

// Constructive couplings: the classical maximal coupling, the (ε, Δ, Δ', ω)
// decomposition of a pair of states, the purification-based quantum coupling
// and the spectrum-aligned diagonal coupling.

#include "qcont/states.hpp"

namespace qcont {

struct ClassicalCoupling {
  Eigen::MatrixXd joint;  // joint(x, y) = Pr{X = x, Y = y}
  RealVector p;
  RealVector q;

  double disagreement() const { return 1.0 - joint.diagonal().sum(); }
};

/// Pr{X = Y = x} = min(p_x, q_x); the residual mass is spread as the product
/// of the normalized residuals (p - min) ⊗ (q - min) / ε.
ClassicalCoupling maximal_classical_coupling(const ClassicalDistribution& p,
                                             const ClassicalDistribution& q);

/// ω = σ/(1+ε) + εΔ/(1+ε) = ρ/(1+ε) + εΔ'/(1+ε) with εΔ = (ρ-σ)_+ and
/// ε = ½||ρ-σ||_1.
struct CouplingDecomposition {
  double epsilon = 0.0;
  DensityOperator delta;
  DensityOperator delta_prime;
  DensityOperator omega;
  /// ρ = σ to within 1e-12: ω = ρ and Δ = Δ' = 1/d are placeholders.
  bool degenerate = false;
};

CouplingDecomposition build_decomposition(const DensityOperator& rho, const DensityOperator& sigma);

struct QuantumCoupling {
  PureBipartite phi;  // purifies ρ: φ^{A1} = ρ, φ^{A2} = ρ^T
  PureBipartite psi;  // purifies σ: ψ^{A1} = σ, ψ^{A2} = σ^T
  Vector vartheta;    // sub-normalized
  Matrix x;           // ρ^{1/2} ω^{-1/2} / √(1+ε)
  Matrix y;           // (σ^T)^{1/2} (ω^T)^{-1/2} / √(1+ε)
  DensityOperator theta;  // Θ^{A1} = ρ, Θ^{A2} = σ^T
  double epsilon = 0.0;
  bool degenerate = false;

  // Diagnostics.
  double overlap_psi = 0.0;         // |⟨ψ|ϑ⟩|
  double overlap_phi = 0.0;         // |⟨φ|ϑ⟩|
  double fidelity_psi_theta = 0.0;  // F(ψ, Θ)
  double fidelity_phi_theta = 0.0;  // F(φ, Θ)
  /// max-abs difference between ϑ = (X ⊗ 1)|ψ⟩ and ϑ = (1 ⊗ Y)|φ⟩.
  double route_mismatch = 0.0;
};

/// Throws InternalConsistencyError if a marginal residual ρ - ϑ^{A1} or
/// σ^T - ϑ^{A2} has an eigenvalue below -1e-9.
QuantumCoupling quantum_coupling(const DensityOperator& rho, const DensityOperator& sigma);

struct DiagonalCoupling {
  DensityOperator omega;  // on A1 A2, ω^{A1} = ρ, ω^{A2} = σ
  Vector phi_vector;      // Σ_i √min(r_i, s_i) |e_i⟩|f_i⟩
  double epsilon_mirsky = 0.0;  // ½ ||(r) - (s)||_1 = 1 - ⟨φ|φ⟩
  double largest_eigenvalue = 0.0;  // ||ω||_∞
};

DiagonalCoupling diagonal_coupling(const DensityOperator& rho, const DensityOperator& sigma);

/// Same construction from explicit spectral decompositions (eigenvalues
/// non-increasing, eigenvectors as columns). Lets callers choose the basis
/// inside degenerate eigenspaces.
DiagonalCoupling diagonal_coupling_from_spectra(const RealVector& r, const Matrix& e,
                                                const RealVector& s, const Matrix& f);

}  // namespace qcont
