#pragma once

// Relative entropy distance from a finitely generated convex set of PSD
// operators, D_C(ρ) = min_{γ ∈ conv{γ_i}} D(ρ||γ), minimized over the
// weight simplex with away-step Frank-Wolfe.

#include <optional>
#include <vector>

#include "qcont/states.hpp"

namespace qcont {

enum class KappaKind {
  exact,             // closed form known for this set
  certified_upper,   // provable upper bound on the largest variation
  sampled_estimate,  // max over probe states; may under-estimate
};

/// C = conv{γ_1, ..., γ_m}. At least one generator must have smallest
/// eigenvalue above 1e-10 so D_C is finite everywhere.
class ConvexSetModel {
 public:
  /// Validates the generators and attaches the certified κ bound
  ///   κ <= min_{i full rank} (-log2 λ_min(γ_i)) + log2 max_i tr γ_i,
  /// which follows from D(τ||γ_i) <= -log2 λ_min(γ_i) for any state τ and
  /// inf_τ D_C(τ) = -log2 max_{γ ∈ C} tr γ.
  explicit ConvexSetModel(std::vector<HermitianOperator> generators);

  ConvexSetModel with_kappa(double kappa, KappaKind kind) const;

  int dim() const { return generators_.front().dim(); }
  int size() const { return static_cast<int>(generators_.size()); }
  const std::vector<HermitianOperator>& generators() const { return generators_; }
  double kappa() const { return kappa_; }
  KappaKind kappa_kind() const { return kappa_kind_; }
  /// inf over states τ of D_C(τ), exact.
  double infimum() const { return infimum_; }

  Matrix mixture(const RealVector& weights) const;

 private:
  std::vector<HermitianOperator> generators_;
  double kappa_ = 0.0;
  KappaKind kappa_kind_ = KappaKind::certified_upper;
  double infimum_ = 0.0;
};

struct OptimizerOptions {
  double tolerance = 1e-8;  // Frank-Wolfe duality gap, bits
  int max_iterations = 20000;
  int line_search_iterations = 60;
};

struct OptimizerResult {
  double value = 0.0;  // bits
  RealVector weights;
  double gradient_norm = 0.0;
  double gap = 0.0;  // final Frank-Wolfe duality gap; value - D_C(ρ) <= gap
  int iterations = 0;
  bool converged = false;
};

/// f(w) = D(ρ || Σ_i w_i γ_i); kInfinity when ρ leaves the mixture's support.
double dc_objective(const DensityOperator& rho, const RealVector& weights, const ConvexSetModel& set);

enum class GradientSupport {
  strict,           // singular mixture is an error
  support_restricted,  // derivative taken on supp γ(w); requires supp ρ ⊆ supp γ(w)
};

/// ∂f/∂w_i = -tr[ρ Dlog2_γ[γ_i]], with the Fréchet derivative of log2 built
/// from first divided differences in the eigenbasis of γ = Σ w_i γ_i.
RealVector dc_gradient(const DensityOperator& rho, const RealVector& weights,
                       const ConvexSetModel& set,
                       GradientSupport mode = GradientSupport::strict);

/// Starts at the best vertex (or `start`), stops once the duality gap is at
/// most `options.tolerance`. Never throws on the iteration cap: the result
/// reports converged = false with the last gap.
OptimizerResult dc_minimize(const DensityOperator& rho, const ConvexSetModel& set,
                            const OptimizerOptions& options = {},
                            const std::optional<RealVector>& start = std::nullopt);

/// Lower estimate of κ: max over `probes` Haar-random pure states of D_C
/// minus the exact infimum. Flagged KappaKind::sampled_estimate.
double sample_kappa(const ConvexSetModel& set, int probes, Rng& rng,
                    const OptimizerOptions& options = {});

}  // namespace qcont
