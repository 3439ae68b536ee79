#include "qcont/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcont/entropies.hpp"
#include "qcont/errors.hpp"

namespace qcont {

namespace {

double eta(double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; }

void require_beta(double beta, const char* where) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    std::ostringstream msg;
    msg << where << ": beta must be positive, got " << beta;
    throw DomainError(msg.str());
  }
}

// q = e^{-βω} and 1 - q without cancellation.
double one_minus_q(double beta, double omega) { return -std::expm1(-beta * omega); }

double energy_of_diagonal(const Matrix& m, const RealVector& energies, int dim_b) {
  const int block = std::max(dim_b, 1);
  double e = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) e += m(i, i).real() * energies[i / block];
  return e;
}

void require_energy(double measured, double bound, const char* where) {
  if (measured > bound + 1e-9 * (1.0 + bound)) {
    std::ostringstream msg;
    msg << where << ": state energy exceeds the bound " << bound;
    throw PreconditionError(msg.str(), measured);
  }
}

std::vector<bool> cutoff_mask(const HamiltonianSpec& h, double cutoff, int dim_b, int& levels) {
  const RealVector& e = h.basis_energies();
  const int block = std::max(dim_b, 1);
  std::vector<bool> inside(static_cast<std::size_t>(e.size()) * block);
  levels = 0;
  for (Eigen::Index b = 0; b < e.size(); ++b) {
    const bool keep = e[b] <= cutoff;
    if (keep) ++levels;
    for (int j = 0; j < block; ++j) inside[b * block + j] = keep;
  }
  return inside;
}

}  // namespace

HamiltonianSpec HamiltonianSpec::levels(RealVector energies) {
  if (energies.size() == 0) throw DomainError("HamiltonianSpec: no levels");
  if (energies[0] != 0.0) throw DomainError("HamiltonianSpec: ground energy must be exactly 0");
  for (Eigen::Index i = 1; i < energies.size(); ++i) {
    if (!(energies[i] >= energies[i - 1]) || !std::isfinite(energies[i])) {
      throw DomainError("HamiltonianSpec: levels must be finite and ascending");
    }
  }
  HamiltonianSpec h;
  h.kind_ = Kind::explicit_levels;
  h.levels_ = energies;
  h.basis_energies_ = std::move(energies);
  return h;
}

HamiltonianSpec HamiltonianSpec::oscillators(std::vector<double> omegas, int n_max) {
  if (omegas.empty()) throw DomainError("HamiltonianSpec: no modes");
  for (double w : omegas) {
    if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("HamiltonianSpec: mode energies must be positive");
  }
  if (n_max < 1) throw DomainError("HamiltonianSpec: Fock cutoff must be at least 1");
  double size = 1.0;
  for (std::size_t i = 0; i < omegas.size(); ++i) size *= n_max + 1;
  if (size > 1e7) throw DomainError("HamiltonianSpec: truncated space too large");

  HamiltonianSpec h;
  h.kind_ = Kind::oscillator_modes;
  h.n_max_ = n_max;
  const int n = static_cast<int>(size);
  h.basis_energies_ = RealVector::Zero(n);
  for (int b = 0; b < n; ++b) {
    int rest = b;
    double e = 0.0;
    for (int i = static_cast<int>(omegas.size()) - 1; i >= 0; --i) {
      e += omegas[i] * (rest % (n_max + 1));
      rest /= n_max + 1;
    }
    h.basis_energies_[b] = e;
  }
  h.omegas_ = std::move(omegas);
  return h;
}

double HamiltonianSpec::energy_ceiling() const {
  if (is_oscillator()) return kInfinity;
  return levels_.mean();
}

double partition_function(const HamiltonianSpec& h, double beta) {
  require_beta(beta, "partition_function");
  if (h.is_oscillator()) {
    double z = 1.0;
    for (double w : h.omegas()) z /= one_minus_q(beta, w);
    return z;
  }
  return (-beta * h.explicit_levels().array()).exp().sum();
}

double mean_energy(const HamiltonianSpec& h, double beta) {
  require_beta(beta, "mean_energy");
  if (h.is_oscillator()) {
    double e = 0.0;
    for (double w : h.omegas()) e += w / std::expm1(beta * w);
    return e;
  }
  const RealVector& levels = h.explicit_levels();
  const Eigen::ArrayXd weights = (-beta * levels.array()).exp();
  return (weights * levels.array()).sum() / weights.sum();
}

double truncation_tail(const HamiltonianSpec& h, double beta) {
  require_beta(beta, "truncation_tail");
  if (!h.is_oscillator()) return 0.0;
  double kept = 1.0;
  for (double w : h.omegas()) kept *= -std::expm1(-beta * w * (h.n_max() + 1));
  return 1.0 - kept;
}

int required_cutoff(const std::vector<double>& omegas, double beta, double tail) {
  require_beta(beta, "required_cutoff");
  if (!(tail > 0.0 && tail < 1.0)) throw DomainError("required_cutoff: tail must be in (0, 1)");
  int n = 1;
  for (double w : omegas) {
    // q^{N+1} <= tail  <=>  N + 1 >= ln(tail) / (-βω)
    const double needed = std::log(tail) / (-beta * w);
    n = std::max(n, static_cast<int>(std::ceil(needed)) - 1);
  }
  return n;
}

namespace {

double log_partition(const HamiltonianSpec& h, double beta) {
  if (h.is_oscillator()) {
    double lz = 0.0;
    for (double w : h.omegas()) lz -= std::log(one_minus_q(beta, w));
    return lz;
  }
  return std::log(partition_function(h, beta));
}

GibbsSolution make_solution(const HamiltonianSpec& h, double beta, double energy) {
  GibbsSolution s;
  s.beta = beta;
  s.Z = partition_function(h, beta);
  s.energy_E = energy;
  s.entropy = log_partition(h, beta) * kLog2E + beta * energy * kLog2E;
  if (h.is_oscillator()) {
    for (double w : h.omegas()) s.occupations.push_back(1.0 / std::expm1(beta * w));
  } else {
    const Eigen::ArrayXd weights = (-beta * h.explicit_levels().array()).exp();
    s.populations = weights / weights.sum();
  }
  return s;
}

}  // namespace

GibbsSolution solve_beta(const HamiltonianSpec& h, double energy) {
  const double ceiling = h.energy_ceiling();
  if (!(energy > 0.0 && energy < ceiling)) {
    std::ostringstream msg;
    msg << "solve_beta: energy " << energy << " outside the attainable interval (0, " << ceiling << ")";
    throw DomainError(msg.str());
  }
  double lo = 1e-6;
  double hi = 1e3;
  while (mean_energy(h, lo) < energy) {
    lo /= 10.0;
    if (lo < 1e-300) throw DomainError("solve_beta: energy too close to the top of the interval");
  }
  while (mean_energy(h, hi) > energy) {
    hi *= 10.0;
    if (hi > 1e300) throw DomainError("solve_beta: energy too close to the ground energy");
  }
  for (int it = 0; it < 4000; ++it) {
    const double mid = hi / lo > 4.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mean_energy(h, mid) > energy) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double r_lo = std::abs(mean_energy(h, lo) - energy);
  const double r_hi = std::abs(mean_energy(h, hi) - energy);
  const double beta = r_lo <= r_hi ? lo : hi;
  const double residual = std::min(r_lo, r_hi) / energy;
  if (residual > 1e-10) throw ConvergenceError("solve_beta: energy residual above 1e-10", residual);
  return make_solution(h, beta, energy);
}

double direct_entropy(const HamiltonianSpec& h, const GibbsSolution& solution) {
  if (!h.is_oscillator()) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < solution.populations.size(); ++i) s += eta(solution.populations[i]);
    return s;
  }
  double total = 0.0;
  for (double w : h.omegas()) {
    const double q = std::exp(-solution.beta * w);
    const double p0 = one_minus_q(solution.beta, w);
    if (p0 < 1e-4) throw DomainError("direct_entropy: occupation too large for direct summation");
    // Tail mass after n terms is q^n; stop once it is below 1e-20.
    double p = p0;
    double tail = 1.0;
    double s = 0.0;
    while (p > 0.0 && tail > 1e-20) {
      s += eta(p);
      p *= q;
      tail *= q;
    }
    total += s;
  }
  return total;
}

double gibbs_entropy(const HamiltonianSpec& h, double energy) {
  if (energy == 0.0) {
    if (h.is_oscillator()) return 0.0;
    const RealVector& levels = h.explicit_levels();
    return std::log2(double((levels.array() == 0.0).count()));
  }
  return solve_beta(h, energy).entropy;
}

double max_entropy(const HamiltonianSpec& h, double energy) {
  if (!(energy >= 0.0)) throw DomainError("max_entropy: energy must be non-negative");
  if (!h.is_oscillator() && energy >= h.energy_ceiling()) {
    return std::log2(double(h.explicit_levels().size()));
  }
  return gibbs_entropy(h, energy);
}

DensityOperator gibbs_state(const HamiltonianSpec& h, double beta) {
  require_beta(beta, "gibbs_state");
  const RealVector w = (-beta * h.basis_energies().array()).exp();
  return DensityOperator::diagonal(w / w.sum());
}

double oscillator_entropy_upper(const std::vector<double>& omegas, double energy) {
  if (omegas.empty()) throw DomainError("oscillator_entropy_upper: no modes");
  if (!(energy >= 0.0)) throw DomainError("oscillator_entropy_upper: energy must be non-negative");
  const double per_mode = energy / double(omegas.size());
  double s = kLog2E * double(omegas.size());
  for (double w : omegas) {
    if (!(w > 0.0)) throw DomainError("oscillator_entropy_upper: mode energies must be positive");
    s += std::log2(per_mode / w + 1.0);
  }
  return s;
}

double energy(const DensityOperator& state, const HamiltonianSpec& h) {
  if (state.dim() != h.dim()) throw DomainError("energy: state and Hamiltonian dimensions differ");
  return energy_of_diagonal(state.matrix(), h.basis_energies(), 0);
}

double energy(const BipartiteState& state, const HamiltonianSpec& h) {
  if (state.dim_a() != h.dim()) throw DomainError("energy: state and Hamiltonian dimensions differ");
  return energy_of_diagonal(state.matrix(), h.basis_energies(), state.dim_b());
}

double lemma4_bound(const HamiltonianSpec& h, double energy, double epsilon) {
  if (!(energy > 0.0)) throw DomainError("lemma4_bound: energy must be positive");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("lemma4_bound: epsilon outside [0, 1]");
  if (epsilon == 0.0) return 0.0;
  return 2.0 * epsilon * max_entropy(h, energy / epsilon) + binary_entropy(epsilon);
}

EnergyBoundParams energy_bound_params(double energy, double epsilon, double epsilon_prime) {
  if (!(energy > 0.0)) throw DomainError("energy bound: energy must be positive");
  if (!(epsilon >= 0.0 && epsilon < epsilon_prime && epsilon_prime <= 1.0)) {
    std::ostringstream msg;
    msg << "energy bound: need 0 <= eps < eps' <= 1, got eps=" << epsilon << " eps'=" << epsilon_prime;
    throw DomainError(msg.str());
  }
  return {energy, epsilon, epsilon_prime, (epsilon_prime - epsilon) / (1.0 + epsilon_prime)};
}

double meta5_bound(const HamiltonianSpec& h, double energy, double epsilon, double epsilon_prime) {
  const EnergyBoundParams p = energy_bound_params(energy, epsilon, epsilon_prime);
  return (p.epsilon_prime + 2.0 * p.delta) * max_entropy(h, energy / p.delta) +
         binary_entropy(p.epsilon_prime) + binary_entropy(p.delta);
}

double meta6_bound(const HamiltonianSpec& h, double energy, double epsilon, double epsilon_prime) {
  const EnergyBoundParams p = energy_bound_params(energy, epsilon, epsilon_prime);
  const double ep = p.epsilon_prime;
  return (2.0 * ep + 4.0 * p.delta) * max_entropy(h, energy / p.delta) +
         (1.0 + ep) * binary_entropy(ep / (1.0 + ep)) + 2.0 * binary_entropy(p.delta);
}

Lemma7Bounds lemma7_bounds(const std::vector<double>& omegas, double energy, double epsilon,
                           double alpha) {
  if (omegas.empty()) throw DomainError("lemma7_bounds: no modes");
  if (!(alpha > 0.0 && alpha <= 0.5)) throw DomainError("lemma7_bounds: alpha outside (0, 1/2]");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw DomainError("lemma7_bounds: epsilon outside [0, 1)");
  if (!(energy > 0.0)) throw DomainError("lemma7_bounds: energy must be positive");
  const double ell = double(omegas.size());
  const double per_mode = energy / ell;
  Lemma7Bounds b;
  b.prefactor = (1.0 + alpha) / (1.0 - alpha) + 2.0 * alpha;
  b.bracket = ell * std::log2(std::exp(1.0) / (alpha * (1.0 - epsilon)));
  for (double w : omegas) {
    if (!(w > 0.0)) throw DomainError("lemma7_bounds: mode energies must be positive");
    b.bracket += std::log2(per_mode / w + 1.0);
  }
  const double ht = clipped_binary((1.0 + alpha) / (1.0 - alpha) * epsilon);
  b.entropy_rhs = epsilon * b.prefactor * b.bracket + (ell + 2.0) * b.prefactor * ht;
  b.conditional_rhs = 2.0 * epsilon * b.prefactor * b.bracket + (2.0 * ell + 4.0) * b.prefactor * ht;
  return b;
}

// ---------------------------------------------------------------------------

namespace {

Matrix mask_projector(const std::vector<bool>& mask, bool value) {
  const int n = static_cast<int>(mask.size());
  Matrix p = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (mask[i] == value) p(i, i) = 1.0;
  }
  return p;
}

CutoffDecomposition decompose(const DensityOperator& state, const HamiltonianSpec& h,
                              double energy_bound, double delta, int dim_b) {
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("cutoff_decompose: delta outside (0, 1]");
  if (!(energy_bound > 0.0)) throw DomainError("cutoff_decompose: energy must be positive");
  require_energy(energy_of_diagonal(state.matrix(), h.basis_energies(), dim_b), energy_bound,
                 "cutoff_decompose");
  CutoffDecomposition c;
  c.cutoff = energy_bound / delta;
  c.inside = cutoff_mask(h, c.cutoff, dim_b, c.levels_inside);
  PinchedState pinched = pinching_diagonal(state, c.inside);
  c.lambda = pinched.weight_outside;
  c.state_le = std::move(pinched.inside);
  c.state_gt = std::move(pinched.outside);
  if (c.state_gt) c.energy_gt = energy_of_diagonal(c.state_gt->matrix(), h.basis_energies(), dim_b);
  return c;
}

}  // namespace

Matrix CutoffDecomposition::projector_le() const { return mask_projector(inside, true); }
Matrix CutoffDecomposition::projector_gt() const { return mask_projector(inside, false); }

CutoffDecomposition cutoff_decompose(const DensityOperator& state, const HamiltonianSpec& h,
                                     double energy_bound, double delta) {
  if (state.dim() != h.dim()) throw DomainError("cutoff_decompose: dimension mismatch");
  return decompose(state, h, energy_bound, delta, 0);
}

CutoffDecomposition cutoff_decompose(const BipartiteState& state, const HamiltonianSpec& h,
                                     double energy_bound, double delta) {
  if (state.dim_a() != h.dim()) throw DomainError("cutoff_decompose: dimension mismatch");
  return decompose(state.state(), h, energy_bound, delta, state.dim_b());
}

// ---------------------------------------------------------------------------

namespace {

DensityOperator sample_constrained(const HamiltonianSpec& h, double energy_bound, int dim_b,
                                   Rng& rng, EnergySampler mode) {
  if (!(energy_bound > 0.0)) throw DomainError("sample_energy_constrained: energy must be positive");
  const int block = std::max(dim_b, 1);
  const RealVector& e = h.basis_energies();
  std::vector<int> low;
  for (Eigen::Index b = 0; b < e.size(); ++b) {
    if (e[b] <= energy_bound) {
      for (int j = 0; j < block; ++j) low.push_back(static_cast<int>(b) * block + j);
    }
  }
  if (low.empty()) throw DomainError("sample_energy_constrained: no levels at or below the energy");
  const int n = h.dim() * block;
  const int k = static_cast<int>(low.size());
  const DensityOperator small = sample_state(k, k, rng);
  Matrix low_state = Matrix::Zero(n, n);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) low_state(low[a], low[b]) = small.matrix()(a, b);
  }
  if (mode == EnergySampler::low_levels) return DensityOperator(low_state);

  const DensityOperator full = sample_state(n, n, rng);
  const double e_low = energy_of_diagonal(low_state, e, dim_b);
  const double e_full = energy_of_diagonal(full.matrix(), e, dim_b);
  double t = uniform01(rng);
  if (e_full > energy_bound) t *= (energy_bound - e_low) / (e_full - e_low);
  return DensityOperator(Matrix((1.0 - t) * low_state + t * full.matrix()));
}

}  // namespace

DensityOperator sample_energy_constrained(const HamiltonianSpec& h, double energy_bound, Rng& rng,
                                          EnergySampler mode) {
  return sample_constrained(h, energy_bound, 0, rng, mode);
}

BipartiteState sample_energy_constrained(const HamiltonianSpec& h, double energy_bound, int dim_b,
                                         Rng& rng, EnergySampler mode) {
  if (dim_b < 1) throw DomainError("sample_energy_constrained: d_B must be positive");
  return BipartiteState(sample_constrained(h, energy_bound, dim_b, rng, mode), h.dim(), dim_b);
}

// ---------------------------------------------------------------------------

double CutoffSteps::min() const {
  return std::min({cutoff_lambda, cutoff_mu, cutoff_energy_rho, cutoff_energy_sigma,
                   trace_norm_truncated, upper_rho, upper_sigma, lower_rho, lower_sigma, easy_part,
                   easy_part_gibbs});
}

CutoffPipeline::CutoffPipeline(const DensityOperator& rho, const DensityOperator& sigma,
                               const HamiltonianSpec& h, double energy_bound)
    : rho_(rho), sigma_(sigma), h_(h), energy_bound_(energy_bound) {
  if (rho.dim() != h.dim() || sigma.dim() != h.dim()) {
    throw DomainError("CutoffPipeline: dimension mismatch");
  }
  require_energy(energy(rho, h), energy_bound, "CutoffPipeline (rho)");
  require_energy(energy(sigma, h), energy_bound, "CutoffPipeline (sigma)");
  epsilon_ = std::min(trace_distance(rho, sigma), 1.0);
  s_rho_ = von_neumann_entropy(rho);
  s_sigma_ = von_neumann_entropy(sigma);
}

CutoffPipeline::CutoffPipeline(const BipartiteState& rho, const BipartiteState& sigma,
                               const HamiltonianSpec& h, double energy_bound)
    : rho_(rho.state()), sigma_(sigma.state()), h_(h), energy_bound_(energy_bound), dim_b_(rho.dim_b()) {
  if (rho.dim_a() != h.dim() || sigma.dim_a() != h.dim() || sigma.dim_b() != dim_b_) {
    throw DomainError("CutoffPipeline: dimension mismatch");
  }
  require_energy(energy(rho, h), energy_bound, "CutoffPipeline (rho)");
  require_energy(energy(sigma, h), energy_bound, "CutoffPipeline (sigma)");
  epsilon_ = std::min(trace_distance(rho.state(), sigma.state()), 1.0);
  s_rho_ = conditional_entropy(rho);
  s_sigma_ = conditional_entropy(sigma);
}

double CutoffPipeline::entropy_of(const DensityOperator& state) const {
  if (!bipartite()) return von_neumann_entropy(state);
  return conditional_entropy(BipartiteState(state, h_.dim(), dim_b_));
}

const CutoffPipeline::Truncated& CutoffPipeline::truncated(double delta) {
  int levels = 0;
  cutoff_mask(h_, energy_bound_ / delta, 0, levels);
  const auto found = cache_.find(levels);
  if (found != cache_.end()) return found->second;

  const CutoffDecomposition a = decompose(rho_, h_, energy_bound_, delta, dim_b_);
  const CutoffDecomposition b = decompose(sigma_, h_, energy_bound_, delta, dim_b_);
  if (!a.state_le || !b.state_le) {
    throw InternalConsistencyError("CutoffPipeline: no weight below the cutoff");
  }
  Truncated t;
  t.lambda = a.lambda;
  t.mu = b.lambda;
  t.energy_gt_rho = a.energy_gt;
  t.energy_gt_sigma = b.energy_gt;
  t.s_rho_le = entropy_of(*a.state_le);
  t.s_sigma_le = entropy_of(*b.state_le);
  t.distance_le = trace_distance(*a.state_le, *b.state_le);
  t.levels_inside = a.levels_inside;
  return cache_.emplace(levels, t).first->second;
}

EnergyBoundCheck CutoffPipeline::check(double epsilon_prime) {
  EnergyBoundCheck out;
  out.params = energy_bound_params(energy_bound_, epsilon_, epsilon_prime);
  const double delta = out.params.delta;
  const double ep = epsilon_prime;
  const double s_gibbs = max_entropy(h_, energy_bound_ / delta);
  const Truncated& t = truncated(delta);
  out.levels_inside = t.levels_inside;

  CutoffSteps& st = out.steps;
  st.cutoff_lambda = delta - t.lambda;
  st.cutoff_mu = delta - t.mu;
  st.cutoff_energy_rho = energy_bound_ - t.lambda * t.energy_gt_rho;
  st.cutoff_energy_sigma = energy_bound_ - t.mu * t.energy_gt_sigma;
  st.trace_norm_truncated = (epsilon_ + delta) / (1.0 - delta) - t.distance_le;

  const double easy_gap = std::abs(t.s_rho_le - t.s_sigma_le);
  const double log_rank = std::log2(double(t.levels_inside));
  double rhs = 0.0;
  if (!bipartite()) {
    const double remainder = binary_entropy(delta) + delta * s_gibbs;
    st.upper_rho = t.s_rho_le + remainder - s_rho_;
    st.upper_sigma = t.s_sigma_le + remainder - s_sigma_;
    st.lower_rho = s_rho_ - (t.s_rho_le - delta * s_gibbs);
    st.lower_sigma = s_sigma_ - (t.s_sigma_le - delta * s_gibbs);
    st.easy_part = ep * log_rank + binary_entropy(ep) - easy_gap;
    st.easy_part_gibbs = ep * s_gibbs + binary_entropy(ep) - easy_gap;
    rhs = (ep + 2.0 * delta) * s_gibbs + binary_entropy(ep) + binary_entropy(delta);
  } else {
    const double remainder = 2.0 * delta * s_gibbs + binary_entropy(delta);
    const double mixing = (1.0 + ep) * binary_entropy(ep / (1.0 + ep));
    st.upper_rho = t.s_rho_le + remainder - s_rho_;
    st.upper_sigma = t.s_sigma_le + remainder - s_sigma_;
    st.lower_rho = s_rho_ - (t.s_rho_le - remainder);
    st.lower_sigma = s_sigma_ - (t.s_sigma_le - remainder);
    st.easy_part = 2.0 * ep * log_rank + mixing - easy_gap;
    st.easy_part_gibbs = 2.0 * ep * s_gibbs + mixing - easy_gap;
    rhs = (2.0 * ep + 4.0 * delta) * s_gibbs + mixing + 2.0 * binary_entropy(delta);
  }

  BoundParams params;
  params.epsilon = epsilon_;
  params.dim_d = h_.dim();
  params.variant = bipartite() ? BoundVariant::meta6 : BoundVariant::meta5;
  params.epsilon_prime = ep;
  out.report = make_report(std::abs(s_rho_ - s_sigma_), rhs, params);
  return out;
}

BoundReport check_lemma4(const DensityOperator& rho, const DensityOperator& sigma,
                         const HamiltonianSpec& h, double energy_bound) {
  require_energy(energy(rho, h), energy_bound, "check_lemma4 (rho)");
  require_energy(energy(sigma, h), energy_bound, "check_lemma4 (sigma)");
  const double eps = std::min(trace_distance(rho, sigma), 1.0);
  BoundParams params;
  params.epsilon = eps;
  params.dim_d = h.dim();
  params.variant = BoundVariant::lemma4;
  const double lhs = std::abs(von_neumann_entropy(rho) - von_neumann_entropy(sigma));
  return make_report(lhs, lemma4_bound(h, energy_bound, eps), params);
}

namespace {

BoundReport lemma7_report(double lhs, double eps, const HamiltonianSpec& h, double energy_bound,
                          double alpha, bool conditional) {
  if (!h.is_oscillator()) throw DomainError("check_lemma7: needs an oscillator Hamiltonian");
  const Lemma7Bounds b = lemma7_bounds(h.omegas(), energy_bound, eps, alpha);
  BoundParams params;
  params.epsilon = eps;
  params.dim_d = h.dim();
  params.variant = conditional ? BoundVariant::lemma7_conditional : BoundVariant::lemma7_entropy;
  params.alpha = alpha;
  return make_report(lhs, conditional ? b.conditional_rhs : b.entropy_rhs, params);
}

}  // namespace

BoundReport check_lemma7(const DensityOperator& rho, const DensityOperator& sigma,
                         const HamiltonianSpec& h, double energy_bound, double alpha) {
  require_energy(energy(rho, h), energy_bound, "check_lemma7 (rho)");
  require_energy(energy(sigma, h), energy_bound, "check_lemma7 (sigma)");
  const double eps = std::min(trace_distance(rho, sigma), 1.0);
  const double lhs = std::abs(von_neumann_entropy(rho) - von_neumann_entropy(sigma));
  return lemma7_report(lhs, eps, h, energy_bound, alpha, false);
}

BoundReport check_lemma7(const BipartiteState& rho, const BipartiteState& sigma,
                         const HamiltonianSpec& h, double energy_bound, double alpha) {
  require_energy(energy(rho, h), energy_bound, "check_lemma7 (rho)");
  require_energy(energy(sigma, h), energy_bound, "check_lemma7 (sigma)");
  const double eps = std::min(trace_distance(rho.state(), sigma.state()), 1.0);
  const double lhs = std::abs(conditional_entropy(rho) - conditional_entropy(sigma));
  return lemma7_report(lhs, eps, h, energy_bound, alpha, true);
}

// ---------------------------------------------------------------------------

namespace {

struct TruncatedGibbs {
  RealVector p;
  int n_max = 0;
  double tail = 0.0;
};

TruncatedGibbs truncated_gibbs(double omega, double energy_value, int n_max) {
  if (!(omega > 0.0)) throw DomainError("oscillator witness: mode energy must be positive");
  const HamiltonianSpec mode = HamiltonianSpec::single_mode(omega, 1);
  const GibbsSolution sol = solve_beta(mode, energy_value);
  TruncatedGibbs g;
  g.n_max = n_max > 0 ? n_max : required_cutoff({omega}, sol.beta, 1e-12);
  const double q = std::exp(-sol.beta * omega);
  g.tail = std::pow(q, g.n_max + 1);
  if (g.tail > 1e-9) {
    std::ostringstream msg;
    msg << "oscillator witness: Fock cutoff " << g.n_max << " leaves Gibbs tail " << g.tail
        << " above 1e-9";
    throw DomainError(msg.str());
  }
  g.p.resize(g.n_max + 1);
  double p = one_minus_q(sol.beta, omega);
  for (int n = 0; n <= g.n_max; ++n) {
    g.p[n] = p;
    p *= q;
  }
  g.p /= g.p.sum();
  return g;
}

RealVector tau_populations(const TruncatedGibbs& g, WitnessTau tau) {
  if (tau == WitnessTau::gibbs) return g.p;
  RealVector t = RealVector::Zero(g.p.size());
  t[0] = 1.0;
  return t;
}

void require_witness_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("oscillator witness: epsilon outside [0, 1]");
}

}  // namespace

OscillatorWitness oscillator_tightness_witness(double omega, double energy_value, double epsilon,
                                               int n_max) {
  require_witness_epsilon(epsilon);
  const TruncatedGibbs g = truncated_gibbs(omega, energy_value, n_max);
  OscillatorWitness w;
  w.n_max = g.n_max;
  w.tail = g.tail;
  w.rho = RealVector::Zero(g.p.size());
  w.rho[0] = 1.0;
  w.sigma = epsilon * g.p;
  w.sigma[0] += 1.0 - epsilon;
  w.gap = std::abs(shannon_entropy(w.sigma) - shannon_entropy(w.rho));
  w.trace_distance = 0.5 * (w.rho - w.sigma).cwiseAbs().sum();
  for (Eigen::Index n = 0; n < w.sigma.size(); ++n) w.energy_sigma += omega * double(n) * w.sigma[n];
  return w;
}

ConditionalWitness oscillator_conditional_witness(double omega, double energy_value, double epsilon,
                                                  int n_max, WitnessTau tau) {
  require_witness_epsilon(epsilon);
  const TruncatedGibbs g = truncated_gibbs(omega, energy_value, n_max);
  const RealVector t = tau_populations(g, tau);
  const int n = static_cast<int>(g.p.size());
  const RealVector root = g.p.cwiseSqrt();

  // σ on span{|nn⟩}: (1-ε)|√p⟩⟨√p| + ε diag(p_n t_n); elsewhere diagonal ε p_n t_m.
  Matrix block = (1.0 - epsilon) * (root * root.transpose()).cast<Complex>();
  Matrix diff = (root * root.transpose()).cast<Complex>();
  for (int k = 0; k < n; ++k) {
    block(k, k) += epsilon * g.p[k] * t[k];
    diff(k, k) -= g.p[k] * t[k];
  }
  double s_ab = entropy_of_spectrum(eig_hermitian(block).eigenvalues);
  double off_mass = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      s_ab += eta(epsilon * g.p[a] * t[b]);
      off_mass += g.p[a] * t[b];
    }
  }
  const RealVector marginal_b = (1.0 - epsilon) * g.p + epsilon * t;

  ConditionalWitness w;
  w.n_max = g.n_max;
  w.tail = g.tail;
  w.cond_rho = -shannon_entropy(g.p);
  w.cond_sigma = s_ab - shannon_entropy(marginal_b);
  w.gap = std::abs(w.cond_rho - w.cond_sigma);
  w.trace_distance = 0.5 * epsilon * (trace_norm(HermitianOperator(diff)) + off_mass);
  for (int k = 0; k < n; ++k) w.energy_rho += omega * k * g.p[k];
  w.energy_sigma = w.energy_rho;  // both marginals on A equal γ(E)
  return w;
}

std::pair<BipartiteState, BipartiteState> oscillator_conditional_witness_states(
    double omega, double energy_value, double epsilon, int n_max, WitnessTau tau) {
  require_witness_epsilon(epsilon);
  if (n_max < 1) throw DomainError("oscillator witness: dense form needs an explicit cutoff");
  const TruncatedGibbs g = truncated_gibbs(omega, energy_value, n_max);
  const RealVector t = tau_populations(g, tau);
  const int n = static_cast<int>(g.p.size());
  Vector psi = Vector::Zero(n * n);
  RealVector product(n * n);
  for (int a = 0; a < n; ++a) {
    psi[a * n + a] = std::sqrt(g.p[a]);
    for (int b = 0; b < n; ++b) product[a * n + b] = g.p[a] * t[b];
  }
  const Matrix rho = psi * psi.adjoint();
  const Matrix sigma = (1.0 - epsilon) * rho + epsilon * Matrix(product.cast<Complex>().asDiagonal());
  return {BipartiteState(DensityOperator(rho), n, n), BipartiteState(DensityOperator(sigma), n, n)};
}

}  // namespace qcont
