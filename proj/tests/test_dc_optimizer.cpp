#include <doctest.h>

#include <cmath>
#include <complex>

#include "qcont/bounds.hpp"
#include "qcont/dc_optimizer.hpp"
#include "qcont/entropies.hpp"
#include "qcont/errors.hpp"
#include "oracle_values.hpp"
#include "test_support.hpp"

using namespace qcont;

namespace {

// Coarse-to-fine grid search over the 2-simplex: each level scans a grid of
// the current triangle and re-centres a shrunken triangle at the best point.
double simplex_grid_minimum(const DensityOperator& rho, const ConvexSetModel& set) {
  RealVector centre = RealVector::Constant(3, 1.0 / 3.0);
  double radius = 1.0;
  double best = kInfinity;
  for (int level = 0; level < 40; ++level) {
    const int n = 24;
    RealVector best_w = centre;
    for (int i = -n; i <= n; ++i) {
      for (int j = -n; j <= n; ++j) {
        RealVector w = centre;
        w[0] += radius * i / n;
        w[1] += radius * j / n;
        w[2] = 1.0 - w[0] - w[1];
        if (w.minCoeff() < 0.0) continue;
        const double v = dc_objective(rho, w, set);
        if (v < best) {
          best = v;
          best_w = w;
        }
      }
    }
    centre = best_w;
    radius *= 0.5;
  }
  return best;
}

ConvexSetModel random_set(int d, Rng& rng) {
  std::vector<HermitianOperator> gens;
  for (int i = 0; i < 3; ++i) gens.emplace_back(sample_state(d, d, rng).matrix());
  return ConvexSetModel(std::move(gens));
}

}  // namespace

TEST_CASE("optimizer matches the simplex grid oracle") {
  Rng rng = testing::rng_for(61);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int d = 2 + k % 2;
    const ConvexSetModel set = random_set(d, rng);
    const DensityOperator rho = sample_state(d, d, rng);
    const OptimizerResult r = dc_minimize(rho, set);
    REQUIRE(r.converged);
    worst = std::max(worst, std::abs(r.value - simplex_grid_minimum(rho, set)));
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("optimizer matches an independently computed minimum") {
  std::vector<HermitianOperator> gens;
  Matrix g1(2, 2), g2(2, 2), g3(2, 2), rho(2, 2);
  g1 << 0.6, Complex(0.1, 0.05), Complex(0.1, -0.05), 0.4;
  g2 << 0.3, Complex(0.0, -0.2), Complex(0.0, 0.2), 0.7;
  g3 << 0.5, 0.0, 0.0, 0.5;
  rho << 0.85, Complex(0.2, -0.1), Complex(0.2, 0.1), 0.15;
  gens.emplace_back(g1);
  gens.emplace_back(g2);
  gens.emplace_back(g3);
  const OptimizerResult r = dc_minimize(DensityOperator(rho), ConvexSetModel(std::move(gens)));
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(oracle::kDcReference).epsilon(1e-9));
}

TEST_CASE("gradient matches central finite differences") {
  Rng rng = testing::rng_for(62);
  for (int k = 0; k < 20; ++k) {
    const int d = 2 + k % 3;
    const ConvexSetModel set = random_set(d, rng);
    const DensityOperator rho = sample_state(d, d, rng);
    RealVector w = sample_dirichlet(3, rng);
    const RealVector grad = dc_gradient(rho, w, set);
    // f extends to the positive orthant; differentiate along each axis.
    for (int i = 0; i < 3; ++i) {
      const double h = 1e-5;
      RealVector plus = w, minus = w;
      plus[i] += h;
      minus[i] -= h;
      const auto f = [&](const RealVector& x) {
        return relative_entropy(rho, HermitianOperator(set.mixture(x)));
      };
      const double fd = (f(plus) - f(minus)) / (2.0 * h);
      CHECK(std::abs(fd - grad[i]) <= 1e-6 * std::max(1.0, std::abs(grad[i])));
    }
  }
}

TEST_CASE("conditional entropy as a D_C minimum") {
  // C = {1 x xi}: minimizer xi = rho^B, value -S(A|B).
  Rng rng = testing::rng_for(63);
  const BipartiteState ab(sample_state(4, 4, rng), 2, 2);
  const Matrix id = Matrix::Identity(2, 2);
  std::vector<HermitianOperator> gens;
  gens.emplace_back(kron(id, sample_state(2, 2, rng).matrix()));
  gens.emplace_back(kron(id, partial_trace(ab, Subsystem::B).matrix()));
  gens.emplace_back(kron(id, sample_state(2, 2, rng).matrix()));
  const OptimizerResult r = dc_minimize(ab.state(), ConvexSetModel(std::move(gens)));
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(-conditional_entropy(ab)).epsilon(1e-8));
  CHECK(r.weights[1] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("set validation and kappa") {
  std::vector<HermitianOperator> singular = {HermitianOperator(DensityOperator::basis_state(2, 0).matrix())};
  CHECK_THROWS_AS(ConvexSetModel{singular}, DomainError);
  std::vector<HermitianOperator> mixed = {HermitianOperator::identity(2)};
  const ConvexSetModel set(mixed);
  CHECK(set.infimum() == doctest::Approx(-1.0));
  CHECK(set.kappa() == doctest::Approx(1.0));
  Rng rng = testing::rng_for(64);
  const double est = sample_kappa(set, 5, rng);
  CHECK(est <= set.kappa() + 1e-9);
  CHECK(set.with_kappa(est, KappaKind::sampled_estimate).kappa_kind() == KappaKind::sampled_estimate);
}

TEST_CASE("check_dc on random sets") {
  Rng rng = testing::rng_for(65);
  for (int k = 0; k < 20; ++k) {
    const ConvexSetModel set = random_set(3, rng);
    const BoundReport r = check_dc(sample_state(3, 3, rng), sample_state(3, 3, rng), set);
    CHECK(r.valid);
  }
}
