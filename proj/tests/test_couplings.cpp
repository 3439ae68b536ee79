#include <doctest.h>

#include <cmath>

#include "qcont/bounds.hpp"
#include "qcont/couplings.hpp"
#include "test_support.hpp"

using namespace qcont;

TEST_CASE("maximal classical coupling") {
  RealVector p(3), q(3);
  p << 0.5, 0.3, 0.2;
  q << 0.2, 0.3, 0.5;
  const ClassicalCoupling c = maximal_classical_coupling(ClassicalDistribution(p), ClassicalDistribution(q));
  CHECK(c.disagreement() == doctest::Approx(0.3));
  CHECK((c.joint.rowwise().sum() - p).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((c.joint.colwise().sum().transpose() - q).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(c.joint.minCoeff() >= 0.0);

  const ClassicalCoupling same = maximal_classical_coupling(ClassicalDistribution(p), ClassicalDistribution(p));
  CHECK(same.disagreement() == doctest::Approx(0.0));
}

TEST_CASE("coupling decomposition identities") {
  Rng rng = testing::rng_for(41);
  for (int d : {2, 3, 5}) {
    const DensityOperator rho = sample_state(d, d, rng);
    const DensityOperator sigma = sample_state(d, d, rng);
    const CouplingDecomposition c = build_decomposition(rho, sigma);
    CHECK(c.epsilon == doctest::Approx(trace_distance(rho, sigma)));
    const double e = c.epsilon;
    const Matrix w1 = (sigma.matrix() + e * c.delta.matrix()) / (1.0 + e);
    const Matrix w2 = (rho.matrix() + e * c.delta_prime.matrix()) / (1.0 + e);
    CHECK(max_abs(Matrix(w1 - c.omega.matrix())) < 1e-12);
    CHECK(max_abs(Matrix(w2 - c.omega.matrix())) < 1e-12);
    CHECK_FALSE(c.degenerate);
  }
  const DensityOperator rho = DensityOperator::maximally_mixed(3);
  CHECK(build_decomposition(rho, rho).degenerate);
}

TEST_CASE("quantum coupling properties") {
  Rng rng = testing::rng_for(42);
  for (int d : {2, 3, 4}) {
    const DensityOperator rho = sample_state(d, d, rng);
    const DensityOperator sigma = sample_state(d, 2, rng);
    const QuantumCoupling qc = quantum_coupling(rho, sigma);
    const double e = qc.epsilon;
    CHECK(max_abs(Matrix(partial_trace(qc.theta.matrix(), d, d, Subsystem::A) - rho.matrix())) <= 1e-9);
    CHECK(max_abs(Matrix(partial_trace(qc.theta.matrix(), d, d, Subsystem::B) - sigma.matrix().transpose())) <= 1e-9);
    CHECK(qc.overlap_psi >= 1.0 - e - 1e-9);
    CHECK(qc.overlap_phi >= 1.0 - e - 1e-9);
    CHECK(qc.fidelity_psi_theta >= 1.0 - e - 1e-9);
    CHECK(qc.route_mismatch < 1e-10);
    CHECK(std::sqrt(largest_eigenvalue(Matrix(qc.x.adjoint() * qc.x))) <= 1.0 + 1e-10);
    CHECK(std::sqrt(largest_eigenvalue(Matrix(qc.y.adjoint() * qc.y))) <= 1.0 + 1e-10);
  }
}

TEST_CASE("quantum coupling of identical states") {
  Rng rng = testing::rng_for(43);
  const DensityOperator rho = sample_state(3, 3, rng);
  const QuantumCoupling qc = quantum_coupling(rho, rho);
  CHECK(qc.degenerate);
  CHECK(qc.overlap_psi == doctest::Approx(1.0));
}

TEST_CASE("diagonal coupling and Mirsky") {
  Rng rng = testing::rng_for(44);
  for (int d : {2, 4, 6}) {
    const DensityOperator rho = sample_state(d, d, rng);
    const DensityOperator sigma = sample_state(d, d, rng);
    const DiagonalCoupling dc = diagonal_coupling(rho, sigma);
    CHECK(max_abs(Matrix(partial_trace(dc.omega.matrix(), d, d, Subsystem::A) - rho.matrix())) <= 1e-10);
    CHECK(max_abs(Matrix(partial_trace(dc.omega.matrix(), d, d, Subsystem::B) - sigma.matrix())) <= 1e-10);
    const double eps = trace_distance(rho, sigma);
    CHECK(dc.largest_eigenvalue >= 1.0 - eps - 1e-9);
    CHECK(dc.epsilon_mirsky <= eps + 1e-9);
    CHECK(dc.epsilon_mirsky == doctest::Approx(1.0 - dc.phi_vector.squaredNorm()));
  }
}

TEST_CASE("diagonal coupling from explicit spectra") {
  RealVector r(2), s(2);
  r << 0.7, 0.3;
  s << 0.6, 0.4;
  const Matrix id = Matrix::Identity(2, 2);
  const DiagonalCoupling dc = diagonal_coupling_from_spectra(r, id, s, id);
  CHECK(dc.epsilon_mirsky == doctest::Approx(0.1));
  CHECK(dc.largest_eigenvalue == doctest::Approx(0.9));
}
