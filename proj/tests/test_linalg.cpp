#include <doctest.h>

#include <cmath>

#include "qcont/errors.hpp"
#include "qcont/linalg.hpp"
#include "test_support.hpp"

using namespace qcont;

TEST_CASE("jacobi reconstructs random hermitian matrices") {
  Rng rng = testing::rng_for(11);
  for (int d : {1, 2, 3, 5, 8, 16, 33}) {
    const Matrix a = testing::random_hermitian(d, rng);
    const Spectrum s = eig_hermitian(a);
    const Matrix& u = s.eigenvectors;
    CHECK(max_abs(Matrix(u * s.eigenvalues.cast<Complex>().asDiagonal() * u.adjoint() - a)) < 1e-11);
    CHECK(max_abs(Matrix(u.adjoint() * u - Matrix::Identity(d, d))) < 1e-12);
    for (int k = 0; k + 1 < d; ++k) CHECK(s.eigenvalues[k] >= s.eigenvalues[k + 1]);
  }
}

TEST_CASE("jacobi agrees with Eigen's solver") {
  Rng rng = testing::rng_for(12);
  for (int d : {2, 4, 7, 12}) {
    const Matrix a = testing::random_hermitian(d, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> ref(a);
    const Spectrum s = eig_hermitian(a);
    for (int k = 0; k < d; ++k) CHECK(s.eigenvalues[k] == doctest::Approx(ref.eigenvalues()[d - 1 - k]).epsilon(1e-12));
  }
}

TEST_CASE("degenerate and block-diagonal spectra") {
  const Matrix id = Matrix::Identity(6, 6);
  const Spectrum s = eig_hermitian(id);
  CHECK(s.sweeps == 0);
  for (int k = 0; k < 6; ++k) CHECK(s.eigenvalues[k] == 1.0);

  Matrix block = Matrix::Zero(40, 40);
  block(3, 3) = 0.5;
  block(3, 17) = Complex(0.1, 0.2);
  block(17, 3) = Complex(0.1, -0.2);
  block(17, 17) = 0.5;
  const Spectrum b = eig_hermitian(block);
  CHECK(b.eigenvalues[0] == doctest::Approx(0.5 + std::sqrt(0.05)));
  CHECK(b.eigenvalues[1] == doctest::Approx(0.5 - std::sqrt(0.05)));
  CHECK(b.residual < 1e-14);
}

TEST_CASE("eigenvector phase convention") {
  Rng rng = testing::rng_for(13);
  const Spectrum s = eig_hermitian(testing::random_hermitian(5, rng));
  for (int k = 0; k < 5; ++k) {
    Eigen::Index idx;
    s.eigenvectors.col(k).cwiseAbs().maxCoeff(&idx);
    CHECK(std::abs(s.eigenvectors(idx, k).imag()) < 1e-14);
    CHECK(s.eigenvectors(idx, k).real() > 0.0);
  }
}

TEST_CASE("matrix functions") {
  Rng rng = testing::rng_for(14);
  const Matrix g = testing::random_hermitian(4, rng);
  const HermitianOperator psd(Matrix(g * g + 0.1 * Matrix::Identity(4, 4)));
  const Matrix r = sqrt_psd(psd);
  CHECK(max_abs(Matrix(r * r - psd.matrix())) < 1e-12);
  const Matrix inv = inverse_sqrt_on_support(psd);
  CHECK(max_abs(Matrix(inv * psd.matrix() * inv - Matrix::Identity(4, 4))) < 1e-10);

  const HermitianOperator lg = matrix_function(psd, [](double x) { return std::log(x); });
  const HermitianOperator back = matrix_function(lg, [](double x) { return std::exp(x); });
  CHECK(max_abs(Matrix(back.matrix() - psd.matrix())) < 1e-11);

  const HermitianOperator neg(Matrix(Matrix::Identity(2, 2) * -1.0));
  CHECK_THROWS_AS(matrix_function(neg, [](double x) { return std::log(x); }), DomainError);
}

TEST_CASE("norms, support, positive part") {
  RealVector d(4);
  d << 0.5, -0.25, 0.0, 1e-20;
  const HermitianOperator op = HermitianOperator::diagonal(d);
  CHECK(trace_norm(op) == doctest::Approx(0.75));
  CHECK(operator_norm(op) == doctest::Approx(0.5));
  CHECK(support_projector(op).trace().real() == doctest::Approx(2.0));
  CHECK(positive_part(op).trace() == doctest::Approx(0.5));
}

TEST_CASE("fidelity of commuting states is the classical fidelity") {
  RealVector p(3), q(3);
  p << 0.5, 0.3, 0.2;
  q << 0.1, 0.6, 0.3;
  const double expected = std::sqrt(0.05) + std::sqrt(0.18) + std::sqrt(0.06);
  CHECK(fidelity(HermitianOperator::diagonal(p), HermitianOperator::diagonal(q)) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("row-major vec identity (A x B)|Phi> = vec(A B^T)") {
  Rng rng = testing::rng_for(15);
  const int d = 3;
  Matrix a(d, d), b(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      a(i, j) = complex_normal(rng);
      b(i, j) = complex_normal(rng);
    }
  const Vector phi = vec_row_major(Matrix::Identity(d, d));
  const Vector lhs = kron(a, b) * phi;
  const Vector rhs = vec_row_major(Matrix(a * b.transpose()));
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(max_abs(Matrix(unvec_row_major(rhs, d, d) - a * b.transpose())) < 1e-13);
}
