#pragma once

// Density operators, bipartite structure, dephasing/pinching channels,
// purifications, steering POVMs and seeded random-state samplers.
//
// Bipartite index convention: the basis vector |i⟩_A |j⟩_B has flat index
// i * d_B + j (A-index major). Transposes are always taken in the fixed
// computational basis.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "qcont/linalg.hpp"

namespace qcont {

/// Positive semidefinite, unit-trace operator. Eigenvalues down to -1e-8
/// (arithmetic noise) are clamped to zero and the trace is renormalized;
/// anything further from a state is rejected with DomainError.
class DensityOperator {
 public:
  explicit DensityOperator(const Matrix& m);
  explicit DensityOperator(HermitianOperator op);

  /// Divides by the trace first; the trace must be positive.
  static DensityOperator normalized(const Matrix& m);
  static DensityOperator pure(const Vector& v);
  static DensityOperator maximally_mixed(int dim);
  static DensityOperator diagonal(const RealVector& probabilities);
  static DensityOperator basis_state(int dim, int index);

  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  const Spectrum& spectrum() const { return op_.spectrum(); }
  const RealVector& eigenvalues() const { return op_.eigenvalues(); }

 private:
  HermitianOperator op_;
};

enum class Subsystem { A, B };

class BipartiteState {
 public:
  BipartiteState(DensityOperator state, int dim_a, int dim_b);

  const DensityOperator& state() const { return state_; }
  const Matrix& matrix() const { return state_.matrix(); }
  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }

 private:
  DensityOperator state_;
  int dim_a_;
  int dim_b_;
};

/// Pure bipartite vector kept in amplitude form; marginals are computed from
/// the d_A x d_B coefficient matrix without building the full projector.
struct PureBipartite {
  Vector amplitudes;
  int dim_a = 0;
  int dim_b = 0;

  Matrix coefficients() const { return unvec_row_major(amplitudes, dim_a, dim_b); }
  Matrix marginal_a() const;
  Matrix marginal_b() const;
  Matrix projector() const { return amplitudes * amplitudes.adjoint(); }
  BipartiteState to_state() const;
};

class ClassicalDistribution {
 public:
  /// Entries >= -1e-9 are clamped to zero; the sum must be 1 within 1e-9 and
  /// is renormalized exactly.
  explicit ClassicalDistribution(RealVector probs);

  const RealVector& probs() const { return probs_; }
  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int i) const { return probs_[i]; }

 private:
  RealVector probs_;
};

Matrix partial_trace(const Matrix& m, int dim_a, int dim_b, Subsystem keep);
DensityOperator partial_trace(const BipartiteState& state, Subsystem keep);
BipartiteState tensor(const DensityOperator& a, const DensityOperator& b);

/// |φ⟩ = (√ρ ⊗ 1)|Φ⟩ with |Φ⟩ = Σ_i |i⟩|i⟩; marginals (ρ, ρ^T).
PureBipartite pretty_good_purification(const DensityOperator& rho);

/// Maximally entangled state (1/√d) Σ_i |ii⟩ on d ⊗ d.
PureBipartite maximally_entangled(int d);

struct DephasedPair {
  ClassicalDistribution p;  // spectrum of ρ
  ClassicalDistribution q;  // diagonal of σ in the eigenbasis of ρ
};
DephasedPair dephase_in_eigenbasis(const DensityOperator& rho, const DensityOperator& sigma);

/// T(ξ) = P ξ P + (1-P) ξ (1-P) written as (1-λ) ξ_≤ + λ ξ_>. A component
/// with weight below 1e-12 is reported absent.
struct PinchedState {
  double weight_outside = 0.0;  // λ = tr (1-P) ξ
  std::optional<DensityOperator> inside;
  std::optional<DensityOperator> outside;

  Matrix reassemble() const;
};

/// `projector` must satisfy P^2 = P within 1e-10.
PinchedState pinching(const DensityOperator& state, const Matrix& projector);
/// Same channel for a projector diagonal in the computational basis.
PinchedState pinching_diagonal(const DensityOperator& state, const std::vector<bool>& inside);

struct EnsembleMember {
  double weight;
  DensityOperator state;
};

struct SteeringPOVM {
  std::vector<Matrix> elements;  // M_x on the purifying system R
  RealVector weights;            // p_x
  Matrix support;                // projector onto supp ψ^R
};

/// POVM on R realizing the decomposition σ = Σ p_x σ_x of the marginal
/// ψ^A: p_x σ_x = tr_R ψ (1 ⊗ M_x). For the canonical purification this is
/// M_x = (σ^T)^{-1/2} p_x σ_x^T (σ^T)^{-1/2} with support-restricted inverses.
/// Throws ValidationError when the decomposition does not sum to σ.
SteeringPOVM steering_povm(const PureBipartite& psi, std::span<const EnsembleMember> decomposition);

/// tr_R ψ (1 ⊗ M) computed directly from the amplitudes.
Matrix steered_operator(const PureBipartite& psi, const Matrix& element);

// ---------------------------------------------------------------------------
// Sampling. All samplers draw from an explicit caller-owned generator; the
// uniform and Gaussian variates are derived from raw 64-bit outputs so the
// streams are identical across standard library implementations.

using Rng = std::mt19937_64;

double uniform01(Rng& rng);
double standard_normal(Rng& rng);
Complex complex_normal(Rng& rng);
RealVector sample_dirichlet(int n, Rng& rng);
Vector sample_pure_vector(int dim, Rng& rng);

/// Hilbert-Schmidt-type measure: partial trace of a Haar pure state on
/// dim x rank, i.e. G G^† / tr for a complex Ginibre dim x rank matrix G.
DensityOperator sample_state(int dim, int rank, Rng& rng);
PureBipartite sample_pure_bipartite(int dim_a, int dim_b, Rng& rng);
/// Σ_x p_x ρ_x ⊗ |x⟩⟨x| with Dirichlet(1,...,1) weights and independent
/// full-rank blocks.
BipartiteState sample_qc_state(int dim_a, int dim_x, Rng& rng);

/// Splitmix64 finalizer; used to derive independent per-case seeds from a
/// campaign seed and a case counter.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter);

}  // namespace qcont
