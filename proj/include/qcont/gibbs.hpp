#pragma once

// Hamiltonians with discrete spectrum (ground energy 0), Gibbs states and the
// energy-constrained continuity bounds built on them.
//
// Oscillator Hamiltonians carry a per-mode Fock cutoff. The cutoff only fixes
// the space sampled states live in; partition functions, β(E) and Gibbs
// entropies are those of the untruncated oscillators.

#include <map>
#include <optional>
#include <vector>

#include "qcont/bounds.hpp"
#include "qcont/states.hpp"

namespace qcont {

class HamiltonianSpec {
 public:
  enum class Kind { explicit_levels, oscillator_modes };

  /// Ascending energies with levels[0] == 0; degenerate levels allowed.
  static HamiltonianSpec levels(RealVector energies);
  /// H = Σ ħω_i a_i† a_i, each mode truncated to occupations 0..n_max.
  static HamiltonianSpec oscillators(std::vector<double> omegas, int n_max);
  static HamiltonianSpec single_mode(double omega, int n_max) { return oscillators({omega}, n_max); }

  Kind kind() const { return kind_; }
  bool is_oscillator() const { return kind_ == Kind::oscillator_modes; }
  const RealVector& explicit_levels() const { return levels_; }
  const std::vector<double>& omegas() const { return omegas_; }
  int mode_count() const { return static_cast<int>(omegas_.size()); }
  int n_max() const { return n_max_; }

  /// Dimension of the (truncated) matrix space.
  int dim() const { return static_cast<int>(basis_energies_.size()); }
  /// Diagonal of H in the matrix basis. Oscillator basis: occupation
  /// multi-index (n_1, ..., n_ℓ), mode 1 most significant.
  const RealVector& basis_energies() const { return basis_energies_; }

  /// Upper end of the attainable mean-energy interval: the level average for
  /// explicit levels, +inf for oscillators.
  double energy_ceiling() const;

 private:
  Kind kind_ = Kind::explicit_levels;
  RealVector levels_;
  std::vector<double> omegas_;
  int n_max_ = 0;
  RealVector basis_energies_;
};

/// Z(β) = tr e^{-βH}; closed product form for oscillators.
double partition_function(const HamiltonianSpec& h, double beta);
/// tr γ(β) H.
double mean_energy(const HamiltonianSpec& h, double beta);
/// Gibbs mass outside the truncated space, 1 - Π_i (1 - q_i^{N+1}) with
/// q_i = e^{-βħω_i}; zero for explicit levels.
double truncation_tail(const HamiltonianSpec& h, double beta);
/// Smallest per-mode cutoff with Gibbs tail q^{N+1} below `tail` for every mode.
int required_cutoff(const std::vector<double>& omegas, double beta, double tail = 1e-12);

struct GibbsSolution {
  double beta = 0.0;
  double Z = 0.0;
  double energy_E = 0.0;
  double entropy = 0.0;  // log2 Z + β E log2 e
  RealVector populations;          // explicit levels: e^{-βE_n}/Z
  std::vector<double> occupations;  // oscillators: mean occupation per mode
};

/// Bisection for tr e^{-βH}(H - E) = 0, started on [1e-6, 1e3] and expanded
/// geometrically. Relative energy residual <= 1e-10.
GibbsSolution solve_beta(const HamiltonianSpec& h, double energy);

/// -Σ p log2 p computed on the populations themselves (per-mode geometric
/// series summed until the terms vanish for oscillators), independent of the
/// log Z formula.
double direct_entropy(const HamiltonianSpec& h, const GibbsSolution& solution);

/// S(γ(E)). E = 0 gives the ground-space limit log2 (ground degeneracy).
double gibbs_entropy(const HamiltonianSpec& h, double energy);
/// max{S(ρ) : tr ρH <= E}: gibbs_entropy below the level average, log2 d at
/// or above it (explicit levels only).
double max_entropy(const HamiltonianSpec& h, double energy);

/// Gibbs state on the matrix space. For oscillators the truncated
/// populations are renormalized.
DensityOperator gibbs_state(const HamiltonianSpec& h, double beta);

/// ℓ log2 e + Σ_i log2(Ē/ħω_i + 1) with Ē = E/ℓ.
double oscillator_entropy_upper(const std::vector<double>& omegas, double energy);

double energy(const DensityOperator& state, const HamiltonianSpec& h);
/// Energy under H ⊗ 1_B.
double energy(const BipartiteState& state, const HamiltonianSpec& h);

// ---------------------------------------------------------------------------
// Bounds.

/// 2ε S(γ(E/ε)) + h(ε).
double lemma4_bound(const HamiltonianSpec& h, double energy, double epsilon);

struct EnergyBoundParams {
  double E = 0.0;
  double epsilon = 0.0;
  double epsilon_prime = 0.0;
  double delta = 0.0;  // (ε' - ε)/(1 + ε')
};
/// Requires E > 0 and 0 <= ε < ε' <= 1.
EnergyBoundParams energy_bound_params(double energy, double epsilon, double epsilon_prime);

/// (ε' + 2δ) S(γ(E/δ)) + h(ε') + h(δ).
double meta5_bound(const HamiltonianSpec& h, double energy, double epsilon, double epsilon_prime);
/// (2ε' + 4δ) S(γ(E/δ)) + (1+ε') h(ε'/(1+ε')) + 2 h(δ).
double meta6_bound(const HamiltonianSpec& h, double energy, double epsilon, double epsilon_prime);

struct Lemma7Bounds {
  double prefactor = 0.0;  // (1+α)/(1-α) + 2α
  double bracket = 0.0;    // Σ log2(Ē/ħω_i + 1) + ℓ log2(e/(α(1-ε)))
  double entropy_rhs = 0.0;
  double conditional_rhs = 0.0;
};
/// Requires 0 < α <= 1/2, 0 <= ε < 1, E > 0.
Lemma7Bounds lemma7_bounds(const std::vector<double>& omegas, double energy, double epsilon,
                           double alpha);

// ---------------------------------------------------------------------------
// Energy cutoff.

struct CutoffDecomposition {
  std::vector<bool> inside;  // basis vectors of P_≤ (on the full, possibly bipartite, space)
  int levels_inside = 0;     // rank of P_≤ on the Hamiltonian's space
  double cutoff = 0.0;       // E/δ
  double lambda = 0.0;       // tr P_> ρ
  std::optional<DensityOperator> state_le;
  std::optional<DensityOperator> state_gt;
  double energy_gt = 0.0;  // tr ρ_> H (0 when ρ_> is absent)

  Matrix projector_le() const;
  Matrix projector_gt() const;
};

/// P_≤ spans the levels with E_n <= E/δ (boundary included). Throws
/// PreconditionError when tr ρH > E (beyond 1e-9 relative).
CutoffDecomposition cutoff_decompose(const DensityOperator& state, const HamiltonianSpec& h,
                                     double energy_bound, double delta);
/// Same with P_≤ ⊗ 1_B; the states are on the full bipartite space.
CutoffDecomposition cutoff_decompose(const BipartiteState& state, const HamiltonianSpec& h,
                                     double energy_bound, double delta);

// ---------------------------------------------------------------------------
// Sampling. States are supported on levels with E_n <= E; the tail variant
// mixes in a full-space state with a weight chosen so tr ρH <= E still holds,
// putting weight above every cutoff.

enum class EnergySampler { low_levels, with_tail };

DensityOperator sample_energy_constrained(const HamiltonianSpec& h, double energy, Rng& rng,
                                          EnergySampler mode = EnergySampler::low_levels);
BipartiteState sample_energy_constrained(const HamiltonianSpec& h, double energy, int dim_b,
                                         Rng& rng, EnergySampler mode = EnergySampler::low_levels);

// ---------------------------------------------------------------------------
// Checks with every intermediate inequality of the cutoff argument. Each
// step value is a slack (right side minus left side).

struct CutoffSteps {
  double cutoff_lambda = 0.0;        // δ - λ
  double cutoff_mu = 0.0;            // δ - μ
  double cutoff_energy_rho = 0.0;    // E - λ tr ρ_> H
  double cutoff_energy_sigma = 0.0;  // E - μ tr σ_> H
  double trace_norm_truncated = 0.0;  // ε' - ½‖ρ_≤ - σ_≤‖₁
  double upper_rho = 0.0;    // S(ρ) <= S(ρ_≤) + h(δ) + δ S(γ(E/δ)); conditional form if bipartite
  double upper_sigma = 0.0;
  double lower_rho = 0.0;    // S(ρ) >= S(ρ_≤) - δ S(γ(E/δ)); conditional form if bipartite
  double lower_sigma = 0.0;
  double easy_part = 0.0;    // |S(ρ_≤) - S(σ_≤)| <= ε' log2 tr P_≤ + h(ε') (AF form if bipartite)
  double easy_part_gibbs = 0.0;  // same with S(γ(E/δ)) in place of log2 tr P_≤

  double min() const;
};

struct EnergyBoundCheck {
  BoundReport report;  // params.epsilon = ε, params.kappa unused
  EnergyBoundParams params;
  CutoffSteps steps;
  int levels_inside = 0;
};

/// Runs the cutoff pipeline for a fixed pair on a grid of ε', caching the
/// truncated-state quantities per cutoff rank.
class CutoffPipeline {
 public:
  CutoffPipeline(const DensityOperator& rho, const DensityOperator& sigma, const HamiltonianSpec& h,
                 double energy_bound);
  CutoffPipeline(const BipartiteState& rho, const BipartiteState& sigma, const HamiltonianSpec& h,
                 double energy_bound);

  bool bipartite() const { return dim_b_ > 0; }
  double epsilon() const { return epsilon_; }
  double entropy_rho() const { return s_rho_; }      // S, or S(A|B) when bipartite
  double entropy_sigma() const { return s_sigma_; }

  /// Cutoff bound for one ε' (entropy form for single systems,
  /// conditional form for bipartite ones). Requires ε < ε' <= 1.
  EnergyBoundCheck check(double epsilon_prime);

 private:
  struct Truncated {
    double lambda = 0.0, mu = 0.0;
    double energy_gt_rho = 0.0, energy_gt_sigma = 0.0;
    double s_rho_le = 0.0, s_sigma_le = 0.0;
    double distance_le = 0.0;
    int levels_inside = 0;
  };
  const Truncated& truncated(double delta);
  double entropy_of(const DensityOperator& state) const;

  DensityOperator rho_;
  DensityOperator sigma_;
  HamiltonianSpec h_;
  double energy_bound_;
  int dim_b_ = 0;  // 0 for single systems
  double epsilon_ = 0.0;
  double s_rho_ = 0.0, s_sigma_ = 0.0;
  std::map<int, Truncated> cache_;
};

/// |S(ρ) - S(σ)| against 2ε S(γ(E/ε)) + h(ε).
BoundReport check_lemma4(const DensityOperator& rho, const DensityOperator& sigma,
                         const HamiltonianSpec& h, double energy_bound);
/// Oscillator bound with parameter α: entropy form (single system) or
/// conditional-entropy form (bipartite).
BoundReport check_lemma7(const DensityOperator& rho, const DensityOperator& sigma,
                         const HamiltonianSpec& h, double energy_bound, double alpha);
BoundReport check_lemma7(const BipartiteState& rho, const BipartiteState& sigma,
                         const HamiltonianSpec& h, double energy_bound, double alpha);

// ---------------------------------------------------------------------------
// Oscillator witnesses (single mode).

struct OscillatorWitness {
  RealVector rho;    // populations of |0⟩⟨0|
  RealVector sigma;  // populations of (1-ε)|0⟩⟨0| + ε γ(E)
  int n_max = 0;
  double tail = 0.0;
  double gap = 0.0;             // |S(ρ) - S(σ)|
  double trace_distance = 0.0;  // ½‖ρ - σ‖₁
  double energy_sigma = 0.0;
};

/// Diagonal witness. n_max = 0 picks the cutoff for a 1e-12 Gibbs tail;
/// an explicit n_max with tail > 1e-9 is a DomainError.
OscillatorWitness oscillator_tightness_witness(double omega, double energy, double epsilon,
                                               int n_max = 0);

enum class WitnessTau { gibbs, vacuum };

struct ConditionalWitness {
  int n_max = 0;
  double tail = 0.0;
  double cond_rho = 0.0;    // S(A|B) of the purification of γ(E)
  double cond_sigma = 0.0;  // S(A|B) of (1-ε)ρ + ε γ(E) ⊗ τ
  double gap = 0.0;
  double trace_distance = 0.0;
  double energy_rho = 0.0;  // under H ⊗ 1
  double energy_sigma = 0.0;
};

/// B is a copy of the truncated mode; τ is diagonal, so σ splits into the
/// span of |nn⟩ (one (N+1)-dimensional block) plus a diagonal remainder.
ConditionalWitness oscillator_conditional_witness(double omega, double energy, double epsilon,
                                                  int n_max, WitnessTau tau = WitnessTau::gibbs);
/// Dense (ρ, σ) for the same construction, for small n_max.
std::pair<BipartiteState, BipartiteState> oscillator_conditional_witness_states(
    double omega, double energy, double epsilon, int n_max, WitnessTau tau = WitnessTau::gibbs);

}  // namespace qcont
