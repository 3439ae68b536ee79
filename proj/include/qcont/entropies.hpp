#pragma once

// Entropy functionals. All values are in bits; formulas containing
// natural-log constants carry explicit log2(e) factors.

#include <limits>

#include "qcont/states.hpp"

namespace qcont {

inline constexpr double kLog2E = 1.4426950408889634;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// -Σ λ log2 λ over eigenvalues above the zero threshold.
double entropy_of_spectrum(const RealVector& eigenvalues);
double von_neumann_entropy(const DensityOperator& rho);
/// h(x) = -x log2 x - (1-x) log2(1-x) on [0, 1].
double binary_entropy(double x);
/// h(x) for x <= 1/2, 1 beyond.
double clipped_binary(double x);
/// S(AB) - S(B).
double conditional_entropy(const BipartiteState& state);

/// D(ρ||γ) = tr ρ (log ρ - log γ) for a PSD (not necessarily normalized) γ.
/// log γ is taken on supp γ only; returns kInfinity when ρ has more than
/// 1e-10 weight outside supp γ.
double relative_entropy(const DensityOperator& rho, const HermitianOperator& gamma);

double shannon_entropy(const RealVector& p);
inline double shannon_entropy(const ClassicalDistribution& p) { return shannon_entropy(p.probs()); }
/// H(X|Y) for a joint distribution joint(x, y).
double conditional_shannon(const Eigen::MatrixXd& joint);

/// g(N) = (N+1) log2(N+1) - N log2 N, the entropy of a single-mode thermal
/// state with mean occupation N.
double gibbs_entropy_g(double n);

}  // namespace qcont
