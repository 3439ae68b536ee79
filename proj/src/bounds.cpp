#include "qcont/bounds.hpp"

#include <cmath>
#include <sstream>

#include "qcont/entropies.hpp"
#include "qcont/errors.hpp"

namespace qcont {

namespace {

void require_epsilon(double epsilon, const char* where) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    std::ostringstream msg;
    msg << where << ": epsilon " << epsilon << " outside [0, 1]";
    throw DomainError(msg.str());
  }
}

double mixing_term(double epsilon) {
  return (1.0 + epsilon) * binary_entropy(epsilon / (1.0 + epsilon));
}

// Trace distances are computed in floating point; values a hair above 1 are
// roundoff.
double clamp_unit(double epsilon) { return std::min(epsilon, 1.0); }

}  // namespace

std::string_view to_string(BoundVariant v) {
  switch (v) {
    case BoundVariant::fannes_exact: return "fannes_exact";
    case BoundVariant::fannes_simplified: return "fannes_simplified";
    case BoundVariant::af_general: return "af_general";
    case BoundVariant::af_classical_B: return "af_classical_B";
    case BoundVariant::dc_generic: return "dc_generic";
    case BoundVariant::ef_cor1: return "ef_cor1";
    case BoundVariant::ec_cor1: return "ec_cor1";
    case BoundVariant::er_cor2: return "er_cor2";
    case BoundVariant::lemma4: return "lemma4";
    case BoundVariant::meta5: return "meta5";
    case BoundVariant::meta6: return "meta6";
    case BoundVariant::lemma7_entropy: return "lemma7_entropy";
    case BoundVariant::lemma7_conditional: return "lemma7_conditional";
  }
  return "unknown";
}

BoundReport make_report(double lhs, double rhs, const BoundParams& params) {
  BoundReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.params = params;
  r.valid = r.slack >= -kSlackTolerance;
  return r;
}

double trace_distance(const Matrix& a, const Matrix& b) {
  return 0.5 * trace_norm(HermitianOperator(Matrix(a - b)));
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  if (a.dim() != b.dim()) throw DomainError("trace_distance: dimension mismatch");
  return trace_distance(a.matrix(), b.matrix());
}

double fannes_audenaert_bound(double epsilon, int d) {
  require_epsilon(epsilon, "fannes_audenaert_bound");
  if (d < 2) throw DomainError("fannes_audenaert_bound: d must be at least 2");
  if (epsilon > 1.0 - 1.0 / d) return std::log2(double(d));
  return epsilon * std::log2(double(d - 1)) + binary_entropy(epsilon);
}

double fannes_simplified_bound(double epsilon, int d) {
  require_epsilon(epsilon, "fannes_simplified_bound");
  if (d < 1) throw DomainError("fannes_simplified_bound: d must be positive");
  return epsilon * std::log2(double(d)) + binary_entropy(epsilon);
}

double af_bound(double epsilon, int dim_a, bool classical_b) {
  require_epsilon(epsilon, "af_bound");
  if (dim_a < 2) throw DomainError("af_bound: d_A must be at least 2");
  const double coefficient = classical_b ? epsilon : 2.0 * epsilon;
  return coefficient * std::log2(double(dim_a)) + mixing_term(epsilon);
}

double dc_bound(double epsilon, double kappa) {
  require_epsilon(epsilon, "dc_bound");
  if (!(kappa >= 0.0)) throw DomainError("dc_bound: kappa must be non-negative");
  return epsilon * kappa + mixing_term(epsilon);
}

Cor1Bounds cor1_bounds(double epsilon, int d) {
  require_epsilon(epsilon, "cor1_bounds");
  if (d < 1) throw DomainError("cor1_bounds: d must be positive");
  Cor1Bounds b;
  b.delta = std::sqrt(epsilon * (2.0 - epsilon));
  const double log_d = std::log2(double(d));
  b.ef_rhs = b.delta * log_d + mixing_term(b.delta);
  b.ec_rhs = 2.0 * b.delta * log_d + mixing_term(b.delta);
  return b;
}

double cor2_bound(double epsilon, int d) {
  require_epsilon(epsilon, "cor2_bound");
  if (d < 1) throw DomainError("cor2_bound: d must be positive");
  return epsilon * std::log2(double(d)) + mixing_term(epsilon);
}

BoundReport check_fannes(const DensityOperator& rho, const DensityOperator& sigma, bool simplified) {
  const double eps = clamp_unit(trace_distance(rho, sigma));
  const int d = rho.dim();
  const double lhs = std::abs(von_neumann_entropy(rho) - von_neumann_entropy(sigma));
  BoundParams params;
  params.epsilon = eps;
  params.dim_d = d;
  params.variant = simplified ? BoundVariant::fannes_simplified : BoundVariant::fannes_exact;
  const double rhs = simplified ? fannes_simplified_bound(eps, d) : fannes_audenaert_bound(eps, d);
  return make_report(lhs, rhs, params);
}

BoundReport check_af(const BipartiteState& rho, const BipartiteState& sigma, bool classical_b) {
  if (rho.dim_a() != sigma.dim_a() || rho.dim_b() != sigma.dim_b()) {
    throw DomainError("check_af: dimension mismatch");
  }
  const double eps = clamp_unit(trace_distance(rho.state(), sigma.state()));
  const double lhs = std::abs(conditional_entropy(rho) - conditional_entropy(sigma));
  BoundParams params;
  params.epsilon = eps;
  params.dim_d = rho.dim_a();
  params.variant = classical_b ? BoundVariant::af_classical_B : BoundVariant::af_general;
  return make_report(lhs, af_bound(eps, rho.dim_a(), classical_b), params);
}

BoundReport check_dc(const DensityOperator& rho, const DensityOperator& sigma,
                     const ConvexSetModel& set, const OptimizerOptions& options) {
  const double eps = clamp_unit(trace_distance(rho, sigma));
  const OptimizerResult a = dc_minimize(rho, set, options);
  const OptimizerResult b = dc_minimize(sigma, set, options);
  if (!a.converged || !b.converged) {
    throw ConvergenceError("check_dc: D_C minimization did not converge",
                           std::max(a.converged ? 0.0 : a.gap, b.converged ? 0.0 : b.gap));
  }
  BoundParams params;
  params.epsilon = eps;
  params.dim_d = set.dim();
  params.variant = BoundVariant::dc_generic;
  params.kappa = set.kappa();
  // The minimizer values carry at most `gap` excess each; charge it to lhs.
  const double lhs = std::max(0.0, std::abs(a.value - b.value) - a.gap - b.gap);
  BoundReport r = make_report(lhs, dc_bound(eps, set.kappa()), params);
  r.kappa_estimated = set.kappa_kind() == KappaKind::sampled_estimate;
  return r;
}

BoundReport check_dc_conditional(const BipartiteState& rho, const BipartiteState& sigma) {
  if (rho.dim_a() != sigma.dim_a() || rho.dim_b() != sigma.dim_b()) {
    throw DomainError("check_dc_conditional: dimension mismatch");
  }
  const double eps = clamp_unit(trace_distance(rho.state(), sigma.state()));
  const double kappa = 2.0 * std::log2(double(rho.dim_a()));
  const double lhs = std::abs(conditional_entropy(rho) - conditional_entropy(sigma));
  BoundParams params;
  params.epsilon = eps;
  params.dim_d = rho.dim_a();
  params.variant = BoundVariant::dc_generic;
  params.kappa = kappa;
  return make_report(lhs, dc_bound(eps, kappa), params);
}

CorPureReports check_cor_pure(const PureBipartite& phi, const PureBipartite& psi) {
  if (phi.dim_a != psi.dim_a || phi.dim_b != psi.dim_b) {
    throw DomainError("check_cor_pure: dimension mismatch");
  }
  const double eps = clamp_unit(trace_distance(phi.projector(), psi.projector()));
  const int d = std::min(phi.dim_a, phi.dim_b);
  // Schmidt coefficients: the spectrum of the smaller marginal.
  const auto marginal_entropy = [](const PureBipartite& v) {
    const Matrix m = v.dim_a <= v.dim_b ? v.marginal_a() : v.marginal_b();
    return entropy_of_spectrum(eig_hermitian(m).eigenvalues);
  };
  const double lhs = std::abs(marginal_entropy(phi) - marginal_entropy(psi));
  const Cor1Bounds c1 = cor1_bounds(eps, d);

  BoundParams params;
  params.epsilon = eps;
  params.dim_d = d;
  params.delta_cor1 = c1.delta;
  CorPureReports out;
  params.variant = BoundVariant::ef_cor1;
  out.ef = make_report(lhs, c1.ef_rhs, params);
  params.variant = BoundVariant::ec_cor1;
  out.ec = make_report(lhs, c1.ec_rhs, params);
  params.variant = BoundVariant::er_cor2;
  params.delta_cor1 = 0.0;
  out.er = make_report(lhs, cor2_bound(eps, d), params);
  return out;
}

std::pair<DensityOperator, DensityOperator> tightness_witness_fannes(int d, double epsilon) {
  if (d < 2) throw DomainError("tightness_witness_fannes: d must be at least 2");
  if (!(epsilon > 0.0 && epsilon <= 1.0 - 1.0 / d + 1e-15)) {
    throw DomainError("tightness_witness_fannes: need 0 < epsilon <= 1 - 1/d");
  }
  RealVector p = RealVector::Constant(d, epsilon / (d - 1));
  p[0] = 1.0 - epsilon;
  return {DensityOperator::diagonal(p), DensityOperator::basis_state(d, 0)};
}

std::pair<BipartiteState, BipartiteState> tightness_witness_af(int d, double epsilon) {
  if (d < 2) throw DomainError("tightness_witness_af: d must be at least 2");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw DomainError("tightness_witness_af: epsilon outside [0, 1]");
  }
  const Matrix phi = maximally_entangled(d).projector();
  const int n = d * d;
  const Matrix rest = Matrix::Identity(n, n) - phi;
  const Matrix rho = (1.0 - epsilon) * phi + (epsilon / (n - 1)) * rest;
  return {BipartiteState(DensityOperator(rho), d, d), BipartiteState(DensityOperator(phi), d, d)};
}

}  // namespace qcont
