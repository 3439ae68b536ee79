#include "qcont/states.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qcont/errors.hpp"

namespace qcont {

namespace {

constexpr double kAcceptTolerance = 1e-8;
constexpr double kAbsentWeight = 1e-12;

HermitianOperator clamp_to_state(const HermitianOperator& op) {
  const RealVector& values = op.eigenvalues();
  if (values.size() == 0) throw DomainError("DensityOperator: empty matrix");
  const double lowest = values[values.size() - 1];
  if (lowest < -kAcceptTolerance) {
    std::ostringstream msg;
    msg << "DensityOperator: negative eigenvalue " << lowest;
    throw DomainError(msg.str());
  }
  const double trace = values.sum();
  if (std::abs(trace - 1.0) > kAcceptTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "DensityOperator: trace " << trace << " differs from 1";
    throw DomainError(msg.str());
  }
  if (lowest >= 0.0 && trace == 1.0) return op;
  RealVector clamped = values.cwiseMax(0.0);
  clamped /= clamped.sum();
  return HermitianOperator::from_spectrum(clamped, op.eigenvectors());
}

}  // namespace

DensityOperator::DensityOperator(const Matrix& m) : op_(clamp_to_state(HermitianOperator(m))) {}

DensityOperator::DensityOperator(HermitianOperator op) : op_(clamp_to_state(op)) {}

DensityOperator DensityOperator::normalized(const Matrix& m) {
  const double trace = m.trace().real();
  if (!(trace > 0.0)) throw DomainError("DensityOperator::normalized: non-positive trace");
  return DensityOperator(Matrix(m / trace));
}

DensityOperator DensityOperator::pure(const Vector& v) {
  const double norm = v.norm();
  if (!(norm > 0.0)) throw DomainError("DensityOperator::pure: zero vector");
  const Vector u = v / norm;
  return DensityOperator(Matrix(u * u.adjoint()));
}

DensityOperator DensityOperator::maximally_mixed(int dim) {
  return DensityOperator(HermitianOperator::diagonal(RealVector::Constant(dim, 1.0 / dim)));
}

DensityOperator DensityOperator::diagonal(const RealVector& probabilities) {
  return DensityOperator(HermitianOperator::diagonal(probabilities));
}

DensityOperator DensityOperator::basis_state(int dim, int index) {
  RealVector p = RealVector::Zero(dim);
  p[index] = 1.0;
  return diagonal(p);
}

BipartiteState::BipartiteState(DensityOperator state, int dim_a, int dim_b)
    : state_(std::move(state)), dim_a_(dim_a), dim_b_(dim_b) {
  if (dim_a < 1 || dim_b < 1 || dim_a * dim_b != state_.dim()) {
    throw DomainError("BipartiteState: d_A * d_B must equal the state dimension");
  }
}

Matrix PureBipartite::marginal_a() const {
  const Matrix c = coefficients();
  return c * c.adjoint();
}

Matrix PureBipartite::marginal_b() const {
  const Matrix c = coefficients();
  return c.transpose() * c.conjugate();
}

BipartiteState PureBipartite::to_state() const {
  return BipartiteState(DensityOperator::pure(amplitudes), dim_a, dim_b);
}

ClassicalDistribution::ClassicalDistribution(RealVector probs) : probs_(std::move(probs)) {
  if (probs_.size() == 0) throw DomainError("ClassicalDistribution: empty");
  for (Eigen::Index i = 0; i < probs_.size(); ++i) {
    if (!(probs_[i] >= -1e-9)) throw DomainError("ClassicalDistribution: negative entry");
    probs_[i] = std::max(probs_[i], 0.0);
  }
  const double sum = probs_.sum();
  if (std::abs(sum - 1.0) > 1e-9) throw DomainError("ClassicalDistribution: does not sum to 1");
  probs_ /= sum;
}

Matrix partial_trace(const Matrix& m, int dim_a, int dim_b, Subsystem keep) {
  if (m.rows() != static_cast<Eigen::Index>(dim_a) * dim_b || m.cols() != m.rows()) {
    throw DomainError("partial_trace: dimension mismatch");
  }
  if (keep == Subsystem::A) {
    Matrix out = Matrix::Zero(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i) {
      for (int k = 0; k < dim_a; ++k) {
        Complex sum = 0.0;
        for (int j = 0; j < dim_b; ++j) sum += m(i * dim_b + j, k * dim_b + j);
        out(i, k) = sum;
      }
    }
    return out;
  }
  Matrix out = Matrix::Zero(dim_b, dim_b);
  for (int j = 0; j < dim_b; ++j) {
    for (int l = 0; l < dim_b; ++l) {
      Complex sum = 0.0;
      for (int i = 0; i < dim_a; ++i) sum += m(i * dim_b + j, i * dim_b + l);
      out(j, l) = sum;
    }
  }
  return out;
}

DensityOperator partial_trace(const BipartiteState& state, Subsystem keep) {
  return DensityOperator(partial_trace(state.matrix(), state.dim_a(), state.dim_b(), keep));
}

BipartiteState tensor(const DensityOperator& a, const DensityOperator& b) {
  return BipartiteState(DensityOperator(kron(a.matrix(), b.matrix())), a.dim(), b.dim());
}

PureBipartite pretty_good_purification(const DensityOperator& rho) {
  const int d = rho.dim();
  return PureBipartite{vec_row_major(sqrt_psd(rho.op())), d, d};
}

PureBipartite maximally_entangled(int d) {
  return PureBipartite{vec_row_major(Matrix::Identity(d, d) / std::sqrt(double(d))), d, d};
}

DephasedPair dephase_in_eigenbasis(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw DomainError("dephase_in_eigenbasis: dimension mismatch");
  const Matrix& u = rho.spectrum().eigenvectors;
  const Matrix rotated = u.adjoint() * sigma.matrix() * u;
  RealVector q = rotated.diagonal().real();
  return DephasedPair{ClassicalDistribution(rho.eigenvalues()), ClassicalDistribution(q)};
}

Matrix PinchedState::reassemble() const {
  Matrix out;
  if (inside) out = (1.0 - weight_outside) * inside->matrix();
  if (outside) {
    const Matrix part = weight_outside * outside->matrix();
    out = out.size() == 0 ? part : Matrix(out + part);
  }
  return out;
}

namespace {

PinchedState split(const Matrix& in_block, const Matrix& out_block) {
  PinchedState result;
  const double w_in = in_block.trace().real();
  const double w_out = out_block.trace().real();
  result.weight_outside = w_out / (w_in + w_out);
  if (w_in > kAbsentWeight) result.inside = DensityOperator::normalized(in_block);
  if (w_out > kAbsentWeight) result.outside = DensityOperator::normalized(out_block);
  if (!result.inside) result.weight_outside = 1.0;
  if (!result.outside) result.weight_outside = 0.0;
  return result;
}

}  // namespace

PinchedState pinching(const DensityOperator& state, const Matrix& projector) {
  if (projector.rows() != state.dim() || projector.cols() != state.dim()) {
    throw DomainError("pinching: dimension mismatch");
  }
  const double idem = max_abs(projector * projector - projector);
  if (idem > 1e-10 || max_abs(projector - projector.adjoint()) > 1e-10) {
    throw ValidationError("pinching: projector is not an orthogonal projector", idem);
  }
  const Matrix complement = Matrix::Identity(state.dim(), state.dim()) - projector;
  return split(projector * state.matrix() * projector, complement * state.matrix() * complement);
}

PinchedState pinching_diagonal(const DensityOperator& state, const std::vector<bool>& inside) {
  const int n = state.dim();
  if (static_cast<int>(inside.size()) != n) throw DomainError("pinching: mask size mismatch");
  Matrix in_block = Matrix::Zero(n, n);
  Matrix out_block = Matrix::Zero(n, n);
  const Matrix& m = state.matrix();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (inside[i] && inside[j]) in_block(i, j) = m(i, j);
      if (!inside[i] && !inside[j]) out_block(i, j) = m(i, j);
    }
  }
  return split(in_block, out_block);
}

Matrix steered_operator(const PureBipartite& psi, const Matrix& element) {
  const Matrix c = psi.coefficients();
  return c * element.transpose() * c.adjoint();
}

SteeringPOVM steering_povm(const PureBipartite& psi, std::span<const EnsembleMember> decomposition) {
  if (decomposition.empty()) throw DomainError("steering_povm: empty decomposition");
  const Matrix c = psi.coefficients();
  const Matrix sigma = c * c.adjoint();
  Matrix total = Matrix::Zero(sigma.rows(), sigma.cols());
  for (const auto& member : decomposition) {
    if (member.state.dim() != psi.dim_a) throw DomainError("steering_povm: dimension mismatch");
    total += member.weight * member.state.matrix();
  }
  const double residual = max_abs(total - sigma);
  if (residual > 1e-9) {
    throw ValidationError("steering_povm: decomposition does not sum to the purified state",
                          residual);
  }

  // C^+ = (C^† C)^+ C^†, and M_x^T = C^+ p_x σ_x (C^†)^+.
  const HermitianOperator gram(Matrix(c.adjoint() * c));
  const Matrix gram_pinv = apply_function(gram.spectrum(), [](double x) { return 1.0 / x; },
                                          SupportMode::support_only);
  const Matrix c_pinv = gram_pinv * c.adjoint();

  SteeringPOVM povm;
  povm.weights.resize(static_cast<Eigen::Index>(decomposition.size()));
  for (std::size_t x = 0; x < decomposition.size(); ++x) {
    const auto& member = decomposition[x];
    const Matrix mt = c_pinv * (member.weight * member.state.matrix()) * c_pinv.adjoint();
    povm.elements.push_back(hermitian_part(Matrix(mt.transpose())));
    povm.weights[static_cast<Eigen::Index>(x)] = member.weight;
  }
  povm.support = support_projector(HermitianOperator(psi.marginal_b()));
  return povm;
}

double uniform01(Rng& rng) {
  // 53 random mantissa bits, mapped into (0, 1].
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

double standard_normal(Rng& rng) {
  const double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex complex_normal(Rng& rng) {
  const double re = standard_normal(rng);
  const double im = standard_normal(rng);
  return Complex(re, im) * (0.5 * std::numbers::sqrt2);
}

RealVector sample_dirichlet(int n, Rng& rng) {
  RealVector w(n);
  for (int i = 0; i < n; ++i) w[i] = -std::log(uniform01(rng));
  return w / w.sum();
}

Vector sample_pure_vector(int dim, Rng& rng) {
  if (dim < 1) throw DomainError("sample_pure_vector: dimension must be positive");
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = complex_normal(rng);
  return v / v.norm();
}

DensityOperator sample_state(int dim, int rank, Rng& rng) {
  if (dim < 1 || rank < 1 || rank > dim) throw DomainError("sample_state: need 1 <= rank <= dim");
  Matrix g(dim, rank);
  for (int j = 0; j < rank; ++j) {
    for (int i = 0; i < dim; ++i) g(i, j) = complex_normal(rng);
  }
  return DensityOperator::normalized(g * g.adjoint());
}

PureBipartite sample_pure_bipartite(int dim_a, int dim_b, Rng& rng) {
  if (dim_a < 1 || dim_b < 1) throw DomainError("sample_pure_bipartite: invalid dimensions");
  return PureBipartite{sample_pure_vector(dim_a * dim_b, rng), dim_a, dim_b};
}

BipartiteState sample_qc_state(int dim_a, int dim_x, Rng& rng) {
  if (dim_a < 1 || dim_x < 1) throw DomainError("sample_qc_state: invalid dimensions");
  const RealVector weights = sample_dirichlet(dim_x, rng);
  Matrix m = Matrix::Zero(dim_a * dim_x, dim_a * dim_x);
  for (int x = 0; x < dim_x; ++x) {
    const DensityOperator block = sample_state(dim_a, dim_a, rng);
    for (int i = 0; i < dim_a; ++i) {
      for (int k = 0; k < dim_a; ++k) m(i * dim_x + x, k * dim_x + x) = weights[x] * block.matrix()(i, k);
    }
  }
  return BipartiteState(DensityOperator(m), dim_a, dim_x);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace qcont
