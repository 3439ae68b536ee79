#pragma once

// Closed-form continuity bounds for finite-dimensional systems, their
// checkers (which recompute the trace distance from the states) and the
// extremal witness pairs.

#include <string_view>
#include <utility>

#include "qcont/dc_optimizer.hpp"
#include "qcont/states.hpp"

namespace qcont {

enum class BoundVariant {
  fannes_exact,
  fannes_simplified,
  af_general,
  af_classical_B,
  dc_generic,
  ef_cor1,
  ec_cor1,
  er_cor2,
  lemma4,
  meta5,
  meta6,
  lemma7_entropy,
  lemma7_conditional,
};

std::string_view to_string(BoundVariant v);

struct BoundParams {
  double epsilon = 0.0;
  int dim_d = 0;
  double delta_cor1 = 0.0;  // √(ε(2-ε)), only for the ef/ec variants
  BoundVariant variant = BoundVariant::fannes_exact;
  double kappa = 0.0;  // dc_generic only
  double alpha = 0.0;  // lemma7 variants only
  double epsilon_prime = 0.0;  // meta5/meta6 only
};

inline constexpr double kSlackTolerance = 1e-9;

struct BoundReport {
  double lhs = 0.0;    // actual |difference|
  double rhs = 0.0;    // bound value
  double slack = 0.0;  // rhs - lhs
  BoundParams params;
  bool valid = false;  // slack >= -kSlackTolerance
  /// κ came from sampling rather than a closed form or certified bound; the
  /// valid flag is then informational only.
  bool kappa_estimated = false;
};

BoundReport make_report(double lhs, double rhs, const BoundParams& params);

double trace_distance(const Matrix& a, const Matrix& b);
double trace_distance(const DensityOperator& a, const DensityOperator& b);

/// ε log2(d-1) + h(ε) for ε <= 1 - 1/d, log2 d beyond.
double fannes_audenaert_bound(double epsilon, int d);
/// ε log2 d + h(ε).
double fannes_simplified_bound(double epsilon, int d);
/// 2ε log2 d_A + (1+ε) h(ε/(1+ε)); coefficient ε instead of 2ε when B is
/// classical.
double af_bound(double epsilon, int dim_a, bool classical_b);
/// εκ + (1+ε) h(ε/(1+ε)).
double dc_bound(double epsilon, double kappa);

struct Cor1Bounds {
  double delta = 0.0;  // √(ε(2-ε))
  double ef_rhs = 0.0;  // δ log2 d + (1+δ) h(δ/(1+δ))
  double ec_rhs = 0.0;  // 2δ log2 d + (1+δ) h(δ/(1+δ))
};
Cor1Bounds cor1_bounds(double epsilon, int d);
/// ε log2 d + (1+ε) h(ε/(1+ε)).
double cor2_bound(double epsilon, int d);

BoundReport check_fannes(const DensityOperator& rho, const DensityOperator& sigma,
                         bool simplified = false);
BoundReport check_af(const BipartiteState& rho, const BipartiteState& sigma, bool classical_b);

/// |D_C(ρ) - D_C(σ)| against εκ + (1+ε) h(ε/(1+ε)) with both D_C values from
/// dc_minimize. Throws ConvergenceError if either minimization fails.
BoundReport check_dc(const DensityOperator& rho, const DensityOperator& sigma,
                     const ConvexSetModel& set, const OptimizerOptions& options = {});
/// Same bound for C = {1 ⊗ ξ}: D_C = -S(A|B) exactly (minimizer ξ = ρ^B),
/// κ = 2 log2 d_A.
BoundReport check_dc_conditional(const BipartiteState& rho, const BipartiteState& sigma);

struct CorPureReports {
  BoundReport ef;  // E_F, δ = √(ε(2-ε)) form
  BoundReport ec;  // E_C, δ = √(ε(2-ε)) form
  BoundReport er;  // E_R, linear in ε
};
/// For pure states E_F = E_C = E_R = S(tr_B ·); d is the smaller dimension.
CorPureReports check_cor_pure(const PureBipartite& phi, const PureBipartite& psi);

/// σ = |0⟩⟨0|, ρ = (1-ε)|0⟩⟨0| + ε/(d-1) (1 - |0⟩⟨0|); saturates the
/// Fannes-Audenaert bound. Requires 0 < ε <= 1 - 1/d.
std::pair<DensityOperator, DensityOperator> tightness_witness_fannes(int d, double epsilon);

/// σ = Φ_d, ρ = (1-ε)Φ_d + ε/(d²-1) (1 - Φ_d); conditional-entropy gap
/// ε log2(d²-1) + h(ε). Returned as (ρ, σ).
std::pair<BipartiteState, BipartiteState> tightness_witness_af(int d, double epsilon);

}  // namespace qcont
