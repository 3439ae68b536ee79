#include <doctest.h>

#include <cmath>

#include "qcont/bounds.hpp"
#include "qcont/entropies.hpp"
#include "qcont/errors.hpp"
#include "oracle_values.hpp"
#include "test_support.hpp"

using namespace qcont;

TEST_CASE("Fannes-Audenaert closed form") {
  CHECK(fannes_audenaert_bound(0.3, 2) == doctest::Approx(oracle::kFannes_d2_eps0p3).epsilon(1e-14));
  CHECK(fannes_audenaert_bound(0.1, 5) == doctest::Approx(oracle::kFannes_d5_eps0p1).epsilon(1e-14));
  CHECK(fannes_audenaert_bound(0.5, 16) == doctest::Approx(oracle::kFannes_d16_eps0p5).epsilon(1e-14));
  CHECK(fannes_audenaert_bound(0.75, 4) == doctest::Approx(oracle::kFannes_d4_eps0p75).epsilon(1e-14));
  CHECK(fannes_audenaert_bound(0.9, 4) == doctest::Approx(2.0));
  CHECK(fannes_simplified_bound(0.3, 2) >= fannes_audenaert_bound(0.3, 2));
  CHECK_THROWS_AS(fannes_audenaert_bound(1.2, 3), DomainError);
  CHECK_THROWS_AS(fannes_audenaert_bound(0.2, 1), DomainError);
}

TEST_CASE("Alicki-Fannes and pure-state closed forms") {
  const Cor1Bounds c = cor1_bounds(0.1, 3);
  CHECK(c.delta == doctest::Approx(oracle::kCor1Delta).epsilon(1e-14));
  CHECK(c.ef_rhs == doctest::Approx(oracle::kCor1Ef).epsilon(1e-14));
  CHECK(c.ec_rhs == doctest::Approx(oracle::kCor1Ec).epsilon(1e-14));
  CHECK(cor2_bound(0.1, 3) == doctest::Approx(oracle::kCor2_eps0p1_d3).epsilon(1e-14));
  CHECK(af_bound(0.1, 8, false) == doctest::Approx(oracle::kAfWitnessBound).epsilon(1e-14));
  CHECK(af_bound(0.1, 8, true) < af_bound(0.1, 8, false));
  CHECK(dc_bound(0.1, 6.0) == doctest::Approx(af_bound(0.1, 8, false)));
}

TEST_CASE("Fannes witness saturates") {
  for (int d : {2, 3, 7}) {
    for (double eps : {0.05, 0.3, 1.0 - 1.0 / d}) {
      const auto [rho, sigma] = tightness_witness_fannes(d, eps);
      const BoundReport r = check_fannes(rho, sigma);
      CHECK(std::abs(r.slack) <= 1e-10);
    }
  }
  CHECK_THROWS_AS(tightness_witness_fannes(3, 0.9), DomainError);
}

TEST_CASE("AF witness against the closed form") {
  const auto [rho, sigma] = tightness_witness_af(8, 0.1);
  const BoundReport r = check_af(rho, sigma, false);
  CHECK(r.lhs == doctest::Approx(oracle::kAfWitnessGap).epsilon(1e-12));
  CHECK(r.rhs == doctest::Approx(oracle::kAfWitnessBound).epsilon(1e-12));
  CHECK(r.slack >= 0.0);
  CHECK(r.slack <= 0.02);
}

TEST_CASE("random pairs respect the bounds") {
  Rng rng = testing::rng_for(51);
  for (int k = 0; k < 100; ++k) {
    const DensityOperator rho = sample_state(3, 3, rng);
    const DensityOperator sigma = sample_state(3, 3, rng);
    CHECK(check_fannes(rho, sigma).valid);
    CHECK(check_fannes(rho, sigma, true).valid);
    const BipartiteState a(sample_state(6, 6, rng), 2, 3);
    const BipartiteState b(sample_state(6, 6, rng), 2, 3);
    CHECK(check_af(a, b, false).valid);
    CHECK(check_dc_conditional(a, b).valid);
    const PureBipartite phi = sample_pure_bipartite(3, 3, rng);
    const PureBipartite psi = sample_pure_bipartite(3, 3, rng);
    const CorPureReports c = check_cor_pure(phi, psi);
    CHECK(c.ef.valid);
    CHECK(c.ec.valid);
    CHECK(c.er.valid);
  }
}

TEST_CASE("report slack and tolerance") {
  BoundParams p;
  CHECK(make_report(1.0, 1.0 - 5e-10, p).valid);
  CHECK_FALSE(make_report(1.0, 1.0 - 5e-9, p).valid);
  CHECK(to_string(BoundVariant::meta6) == "meta6");
}
