#include <doctest.h>

#include <cmath>

#include "qcont/entropies.hpp"
#include "qcont/errors.hpp"
#include "qcont/gibbs.hpp"
#include "oracle_values.hpp"
#include "test_support.hpp"

using namespace qcont;

TEST_CASE("hamiltonian construction") {
  CHECK_THROWS_AS(HamiltonianSpec::levels(RealVector::LinSpaced(3, 1.0, 3.0)), DomainError);
  RealVector unsorted(3);
  unsorted << 0.0, 2.0, 1.0;
  CHECK_THROWS_AS(HamiltonianSpec::levels(unsorted), DomainError);
  const HamiltonianSpec two = HamiltonianSpec::oscillators({1.0, 2.0}, 2);
  CHECK(two.dim() == 9);
  // mode 1 most significant: index 3 = (1, 0)
  CHECK(two.basis_energies()[3] == 1.0);
  CHECK(two.basis_energies()[1] == 2.0);
  CHECK(std::isinf(two.energy_ceiling()));
  RealVector lv(3);
  lv << 0.0, 1.0, 3.0;
  CHECK(HamiltonianSpec::levels(lv).energy_ceiling() == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("single mode at E = 1") {
  const HamiltonianSpec mode = HamiltonianSpec::single_mode(1.0, 1);
  const GibbsSolution s = solve_beta(mode, 1.0);
  CHECK(std::abs(s.beta - oracle::kLn2) <= 1e-10);
  CHECK(std::abs(s.entropy - 2.0) <= 1e-10);
  CHECK(std::abs(direct_entropy(mode, s) - 2.0) <= 1e-10);
  CHECK(gibbs_entropy(mode, 3.0) == doctest::Approx(oracle::kG_3).epsilon(1e-12));
}

TEST_CASE("two-level system at E = 1/4") {
  const HamiltonianSpec q = HamiltonianSpec::levels(RealVector::LinSpaced(2, 0.0, 1.0));
  CHECK(std::abs(gibbs_entropy(q, 0.25) - oracle::kH_quarter) <= 1e-10);
  CHECK_THROWS_AS(solve_beta(q, 0.5), DomainError);
  CHECK_THROWS_AS(solve_beta(q, 0.7), DomainError);
  CHECK(max_entropy(q, 0.7) == doctest::Approx(1.0));
  CHECK(gibbs_entropy(q, 0.0) == 0.0);
}

TEST_CASE("three levels and two modes against the oracle") {
  RealVector lv(3);
  lv << 0.0, 1.0, 3.0;
  const GibbsSolution s = solve_beta(HamiltonianSpec::levels(lv), 0.7);
  CHECK(s.beta == doctest::Approx(oracle::kBeta_levels013_E0p7).epsilon(1e-10));
  CHECK(s.Z == doctest::Approx(oracle::kZ_levels013_E0p7).epsilon(1e-10));
  CHECK(s.entropy == doctest::Approx(oracle::kS_levels013_E0p7).epsilon(1e-10));

  const HamiltonianSpec pair = HamiltonianSpec::oscillators({1.0, 2.0}, 4);
  CHECK(partition_function(pair, 1.0) == doctest::Approx(oracle::kZ_modes12_beta1).epsilon(1e-13));
  const GibbsSolution p = solve_beta(pair, 4.0);
  CHECK(p.beta == doctest::Approx(oracle::kBeta_modes12_E4).epsilon(1e-10));
  CHECK(p.entropy == doctest::Approx(oracle::kS_modes12_E4).epsilon(1e-10));
  CHECK(oscillator_entropy_upper({1.0, 2.0}, 4.0) == doctest::Approx(oracle::kOscUpper_modes12_E4).epsilon(1e-13));
  CHECK(p.entropy <= oscillator_entropy_upper({1.0, 2.0}, 4.0));
}

TEST_CASE("truncation tail and cutoff") {
  const HamiltonianSpec mode = HamiltonianSpec::single_mode(1.0, 10);
  const double beta = 0.5;
  CHECK(truncation_tail(mode, beta) == doctest::Approx(std::exp(-beta * 11)).epsilon(1e-12));
  const int n = required_cutoff({1.0}, beta);
  CHECK(std::exp(-beta * (n + 1)) <= 1e-12);
  CHECK(std::exp(-beta * n) > 1e-12);
  const DensityOperator g = gibbs_state(mode, beta);
  CHECK(g.matrix().trace().real() == doctest::Approx(1.0));
}

TEST_CASE("energy-bound closed forms against the oracle") {
  const HamiltonianSpec mode = HamiltonianSpec::single_mode(1.0, 40);
  CHECK(lemma4_bound(mode, 2.0, 0.1) == doctest::Approx(oracle::kLemma4_E2_eps0p1).epsilon(1e-11));
  CHECK(meta5_bound(mode, 2.0, 0.1, 0.3) == doctest::Approx(oracle::kMeta5_E2_eps0p1_ep0p3).epsilon(1e-11));
  CHECK(meta6_bound(mode, 2.0, 0.1, 0.3) == doctest::Approx(oracle::kMeta6_E2_eps0p1_ep0p3).epsilon(1e-11));
  const Lemma7Bounds b = lemma7_bounds({1.0, 2.0}, 4.0, 0.1, 0.1);
  CHECK(b.entropy_rhs == doctest::Approx(oracle::kLemma7Entropy_modes12_E4).epsilon(1e-13));
  CHECK(b.conditional_rhs == doctest::Approx(oracle::kLemma7Conditional_modes12_E4).epsilon(1e-13));
  CHECK_THROWS_AS(energy_bound_params(2.0, 0.3, 0.3), DomainError);
  CHECK_THROWS_AS(lemma7_bounds({1.0}, 2.0, 0.1, 0.6), DomainError);
}

TEST_CASE("cutoff decomposition") {
  const HamiltonianSpec mode = HamiltonianSpec::single_mode(1.0, 20);
  Rng rng = testing::rng_for(71);
  const DensityOperator rho = sample_energy_constrained(mode, 2.0, rng, EnergySampler::with_tail);
  CHECK(energy(rho, mode) <= 2.0 + 1e-9);
  const CutoffDecomposition c = cutoff_decompose(rho, mode, 2.0, 0.25);
  CHECK(c.cutoff == doctest::Approx(8.0));
  CHECK(c.levels_inside == 9);
  CHECK(c.lambda <= 0.25 + 1e-12);
  CHECK(c.lambda * c.energy_gt <= 2.0 + 1e-9);
  CHECK(max_abs(Matrix(c.projector_le() + c.projector_gt() - Matrix::Identity(21, 21))) == 0.0);
  CHECK_THROWS_AS(cutoff_decompose(rho, mode, 0.5 * energy(rho, mode), 0.25), PreconditionError);
}

TEST_CASE("cutoff pipeline steps are non-negative") {
  const HamiltonianSpec mode = HamiltonianSpec::single_mode(1.0, 30);
  Rng rng = testing::rng_for(72);
  for (int k = 0; k < 10; ++k) {
    const auto mode_k = k % 2 ? EnergySampler::low_levels : EnergySampler::with_tail;
    const DensityOperator rho = sample_energy_constrained(mode, 2.0, rng, mode_k);
    const DensityOperator other = sample_energy_constrained(mode, 2.0, rng, EnergySampler::with_tail);
    const double t = uniform01(rng);
    const DensityOperator sigma(Matrix((1.0 - t) * rho.matrix() + t * other.matrix()));
    CutoffPipeline pipe(rho, sigma, mode, 2.0);
    for (double ep = pipe.epsilon() + 0.05; ep <= 1.0; ep += 0.1) {
      const EnergyBoundCheck chk = pipe.check(ep);
      CHECK(chk.report.valid);
      CHECK(chk.steps.min() >= -1e-9);
    }
    CHECK(check_lemma4(rho, sigma, mode, 2.0).valid);
    CHECK(check_lemma7(rho, sigma, mode, 2.0, 0.1).valid);
  }
}

TEST_CASE("bipartite cutoff pipeline") {
  const HamiltonianSpec mode = HamiltonianSpec::single_mode(1.0, 8);
  Rng rng = testing::rng_for(73);
  for (int k = 0; k < 4; ++k) {
    const BipartiteState rho = sample_energy_constrained(mode, 2.0, 2, rng, EnergySampler::with_tail);
    const BipartiteState sigma = sample_energy_constrained(mode, 2.0, 2, rng);
    CHECK(energy(rho, mode) <= 2.0 + 1e-9);
    CutoffPipeline pipe(rho, sigma, mode, 2.0);
    const double ep = std::min(1.0, pipe.epsilon() + 0.1);
    const EnergyBoundCheck chk = pipe.check(ep);
    CHECK(chk.report.valid);
    CHECK(chk.steps.min() >= -1e-9);
    CHECK(check_lemma7(rho, sigma, mode, 2.0, 0.25).valid);
  }
}

TEST_CASE("oscillator witness") {
  const OscillatorWitness w = oscillator_tightness_witness(1.0, 100.0, 0.2);
  CHECK(w.tail <= 1e-12);
  CHECK(w.gap == doctest::Approx(oracle::kOscWitnessGap_E100_eps0p2).epsilon(1e-9));
  CHECK(w.gap >= 0.2 * oracle::kG_100);
  const HamiltonianSpec mode = HamiltonianSpec::single_mode(1.0, w.n_max);
  const double rhs = lemma4_bound(mode, 100.0, w.trace_distance);
  CHECK(rhs >= w.gap);
  CHECK(rhs / w.gap <= 3.0);
  CHECK_THROWS_AS(oscillator_tightness_witness(1.0, 100.0, 0.2, 50), DomainError);
}

TEST_CASE("structured conditional witness matches the dense construction") {
  for (auto tau : {WitnessTau::gibbs, WitnessTau::vacuum}) {
    const ConditionalWitness w = oscillator_conditional_witness(1.0, 0.05, 0.3, 7, tau);
    const auto [rho, sigma] = oscillator_conditional_witness_states(1.0, 0.05, 0.3, 7, tau);
    CHECK(w.cond_rho == doctest::Approx(conditional_entropy(rho)).epsilon(1e-10));
    CHECK(w.cond_sigma == doctest::Approx(conditional_entropy(sigma)).epsilon(1e-10));
    CHECK(w.trace_distance == doctest::Approx(0.5 * trace_norm(HermitianOperator(Matrix(rho.matrix() - sigma.matrix())))).epsilon(1e-10));
  }
}

TEST_CASE("cutoff register carries at most h(lambda) about B") {
  // ρ = (1-λ) ρ_≤ + λ ρ_> with a binary register X marking the branch:
  // I(X:B) = S(ρ^B) - (1-λ) S(ρ_≤^B) - λ S(ρ_>^B) <= h(λ).
  const HamiltonianSpec mode = HamiltonianSpec::single_mode(1.0, 6);
  Rng rng = testing::rng_for(74);
  for (int k = 0; k < 20; ++k) {
    const BipartiteState rho = sample_energy_constrained(mode, 1.5, 2, rng, EnergySampler::with_tail);
    const double delta = 0.2 + 0.03 * k;
    const CutoffDecomposition c = cutoff_decompose(rho, mode, 1.5, delta);
    if (!c.state_gt || !c.state_le) continue;
    const auto marginal_b = [](const DensityOperator& s) {
      return von_neumann_entropy(partial_trace(BipartiteState(s, 7, 2), Subsystem::B));
    };
    const Matrix pinched = (1.0 - c.lambda) * c.state_le->matrix() + c.lambda * c.state_gt->matrix();
    const double info = marginal_b(DensityOperator(pinched)) - (1.0 - c.lambda) * marginal_b(*c.state_le) -
                        c.lambda * marginal_b(*c.state_gt);
    CHECK(info >= -1e-12);
    CHECK(info <= binary_entropy(c.lambda) + 1e-12);
    CHECK(c.lambda <= delta + 1e-12);
  }
}
