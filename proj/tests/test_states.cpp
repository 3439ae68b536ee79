#include <doctest.h>

#include <array>
#include <cmath>

#include "qcont/errors.hpp"
#include "qcont/states.hpp"
#include "test_support.hpp"

using namespace qcont;

TEST_CASE("density operator validation") {
  Matrix bad = Matrix::Identity(2, 2);
  bad(1, 1) = -0.5;
  bad(0, 0) = 1.5;
  CHECK_THROWS_AS(DensityOperator{bad}, DomainError);
  Matrix noisy = Matrix::Identity(2, 2) * 0.5;
  noisy(1, 1) -= 1e-9;
  const DensityOperator rho(noisy);
  CHECK(rho.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(DensityOperator::normalized(Matrix::Zero(2, 2)), DomainError);
}

TEST_CASE("samplers produce valid states deterministically") {
  Rng a = testing::rng_for(21);
  Rng b = testing::rng_for(21);
  for (int d : {2, 3, 6}) {
    const DensityOperator x = sample_state(d, d, a);
    const DensityOperator y = sample_state(d, d, b);
    CHECK(max_abs(Matrix(x.matrix() - y.matrix())) == 0.0);
    CHECK(x.eigenvalues()[d - 1] >= 0.0);
    CHECK(x.matrix().trace().real() == doctest::Approx(1.0));
  }
  const RealVector p = sample_dirichlet(5, a);
  CHECK(p.sum() == doctest::Approx(1.0));
  CHECK(p.minCoeff() >= 0.0);
  CHECK(sample_pure_vector(4, a).norm() == doctest::Approx(1.0));
}

TEST_CASE("mix_seed separates neighbouring counters") {
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
  CHECK(mix_seed(7, 3) == mix_seed(7, 3));
}

TEST_CASE("partial traces and tensor products") {
  Rng rng = testing::rng_for(22);
  const DensityOperator a = sample_state(2, 2, rng);
  const DensityOperator b = sample_state(3, 3, rng);
  const BipartiteState ab = tensor(a, b);
  CHECK(max_abs(Matrix(partial_trace(ab, Subsystem::A).matrix() - a.matrix())) < 1e-13);
  CHECK(max_abs(Matrix(partial_trace(ab, Subsystem::B).matrix() - b.matrix())) < 1e-13);
  // index convention: |i>|j> -> i * d_B + j
  CHECK(std::abs(ab.matrix()(1 * 3 + 2, 1 * 3 + 2) - a.matrix()(1, 1) * b.matrix()(2, 2)) < 1e-14);
}

TEST_CASE("pure bipartite marginals") {
  Rng rng = testing::rng_for(23);
  const PureBipartite psi = sample_pure_bipartite(2, 4, rng);
  const Matrix full = psi.projector();
  CHECK(max_abs(Matrix(psi.marginal_a() - partial_trace(full, 2, 4, Subsystem::A))) < 1e-13);
  CHECK(max_abs(Matrix(psi.marginal_b() - partial_trace(full, 2, 4, Subsystem::B))) < 1e-13);
  const PureBipartite phi = maximally_entangled(3);
  CHECK(max_abs(Matrix(phi.marginal_a() - Matrix::Identity(3, 3) / 3.0)) < 1e-14);
}

TEST_CASE("pretty good purification marginals are rho and rho^T") {
  Rng rng = testing::rng_for(24);
  const DensityOperator rho = sample_state(4, 4, rng);
  const PureBipartite p = pretty_good_purification(rho);
  CHECK(max_abs(Matrix(p.marginal_a() - rho.matrix())) < 1e-12);
  CHECK(max_abs(Matrix(p.marginal_b() - rho.matrix().transpose())) < 1e-12);
}

TEST_CASE("dephasing in the eigenbasis of rho") {
  Rng rng = testing::rng_for(25);
  const DensityOperator rho = sample_state(3, 3, rng);
  const DensityOperator sigma = sample_state(3, 3, rng);
  const DephasedPair dp = dephase_in_eigenbasis(rho, sigma);
  for (int i = 0; i < 3; ++i) CHECK(dp.p[i] == doctest::Approx(rho.eigenvalues()[i]));
  CHECK(dp.q.probs().sum() == doctest::Approx(1.0));
}

TEST_CASE("pinching splits and reassembles") {
  Rng rng = testing::rng_for(26);
  const DensityOperator rho = sample_state(5, 5, rng);
  const std::vector<bool> inside = {true, true, false, true, false};
  const PinchedState t = pinching_diagonal(rho, inside);
  Matrix expected = rho.matrix();
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (inside[i] != inside[j]) expected(i, j) = 0.0;
  CHECK(max_abs(Matrix(t.reassemble() - expected)) < 1e-13);
  CHECK(t.weight_outside == doctest::Approx((rho.matrix()(2, 2) + rho.matrix()(4, 4)).real()));

  Matrix p = Matrix::Zero(5, 5);
  for (int i = 0; i < 5; ++i) p(i, i) = inside[i] ? 1.0 : 0.0;
  CHECK(max_abs(Matrix(pinching(rho, p).reassemble() - expected)) < 1e-13);
  CHECK_THROWS(pinching(rho, Matrix(Matrix::Identity(5, 5) * 0.5)));

  const PinchedState all = pinching_diagonal(rho, std::vector<bool>(5, true));
  CHECK_FALSE(all.outside.has_value());
}

TEST_CASE("steering POVM realizes a decomposition") {
  Rng rng = testing::rng_for(27);
  const DensityOperator s1 = sample_state(3, 3, rng);
  const DensityOperator s2 = sample_state(3, 1, rng);
  const Matrix sigma = 0.3 * s1.matrix() + 0.7 * s2.matrix();
  const PureBipartite psi = pretty_good_purification(DensityOperator(sigma));
  const std::array<EnsembleMember, 2> dec = {EnsembleMember{0.3, s1}, EnsembleMember{0.7, s2}};
  const SteeringPOVM m = steering_povm(psi, dec);
  CHECK(max_abs(Matrix(steered_operator(psi, m.elements[0]) - 0.3 * s1.matrix())) < 1e-10);
  CHECK(max_abs(Matrix(steered_operator(psi, m.elements[1]) - 0.7 * s2.matrix())) < 1e-10);
  CHECK(max_abs(Matrix(m.elements[0] + m.elements[1] - m.support)) < 1e-10);

  const std::array<EnsembleMember, 1> wrong = {EnsembleMember{1.0, s1}};
  CHECK_THROWS_AS(steering_povm(psi, wrong), ValidationError);
}

TEST_CASE("qc states are block diagonal in the classical register") {
  Rng rng = testing::rng_for(28);
  const BipartiteState qc = sample_qc_state(2, 3, rng);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y)
          if (x != y) CHECK(std::abs(qc.matrix()(i * 3 + x, j * 3 + y)) < 1e-15);
}
