#include "qcont/dc_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "qcont/entropies.hpp"
#include "qcont/errors.hpp"

namespace qcont {

ConvexSetModel::ConvexSetModel(std::vector<HermitianOperator> generators)
    : generators_(std::move(generators)) {
  if (generators_.empty()) throw DomainError("ConvexSetModel: no generators");
  const int d = generators_.front().dim();
  double best_floor = kInfinity;
  double max_trace = 0.0;
  for (const auto& g : generators_) {
    if (g.dim() != d) throw DomainError("ConvexSetModel: generator dimension mismatch");
    const double lowest = g.eigenvalues()[d - 1];
    if (lowest < -1e-10) throw DomainError("ConvexSetModel: generator is not PSD");
    if (lowest > 1e-10) best_floor = std::min(best_floor, -std::log2(lowest));
    max_trace = std::max(max_trace, g.trace());
  }
  if (!std::isfinite(best_floor)) {
    throw DomainError("ConvexSetModel: at least one generator must have full rank");
  }
  infimum_ = -std::log2(max_trace);
  kappa_ = best_floor - infimum_;
}

ConvexSetModel ConvexSetModel::with_kappa(double kappa, KappaKind kind) const {
  ConvexSetModel copy = *this;
  copy.kappa_ = kappa;
  copy.kappa_kind_ = kind;
  return copy;
}

Matrix ConvexSetModel::mixture(const RealVector& weights) const {
  if (weights.size() != size()) throw DomainError("ConvexSetModel::mixture: weight count mismatch");
  Matrix m = Matrix::Zero(dim(), dim());
  for (int i = 0; i < size(); ++i) {
    if (weights[i] != 0.0) m += weights[i] * generators_[i].matrix();
  }
  return m;
}

double dc_objective(const DensityOperator& rho, const RealVector& weights, const ConvexSetModel& set) {
  return relative_entropy(rho, HermitianOperator(set.mixture(weights)));
}

RealVector dc_gradient(const DensityOperator& rho, const RealVector& weights,
                       const ConvexSetModel& set, GradientSupport mode) {
  const HermitianOperator gamma(set.mixture(weights));
  const Spectrum& gs = gamma.spectrum();
  const int d = gs.dim();
  const double threshold = gs.zero_threshold();
  std::vector<bool> in_support(d);
  for (int a = 0; a < d; ++a) {
    in_support[a] = gs.eigenvalues[a] > threshold;
    if (!in_support[a] && mode == GradientSupport::strict) {
      throw DomainError(
          "dc_gradient: mixture is singular; use GradientSupport::support_restricted");
    }
  }
  const Matrix& u = gs.eigenvectors;
  const Matrix rho_t = u.adjoint() * rho.matrix() * u;
  for (int a = 0; a < d; ++a) {
    if (!in_support[a] && rho_t(a, a).real() > 1e-10) {
      throw DomainError("dc_gradient: state has weight outside the support of the mixture");
    }
  }

  // First divided differences of log2 on the spectrum of γ.
  Eigen::MatrixXd divided = Eigen::MatrixXd::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    if (!in_support[a]) continue;
    for (int b = 0; b < d; ++b) {
      if (!in_support[b]) continue;
      const double la = gs.eigenvalues[a];
      const double lb = gs.eigenvalues[b];
      if (std::abs(la - lb) <= 1e-10 * std::max(la, lb)) {
        divided(a, b) = kLog2E / (0.5 * (la + lb));
      } else {
        divided(a, b) = (std::log2(la) - std::log2(lb)) / (la - lb);
      }
    }
  }

  RealVector grad(set.size());
  for (int i = 0; i < set.size(); ++i) {
    const Matrix k = u.adjoint() * set.generators()[i].matrix() * u;
    double sum = 0.0;
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        if (divided(a, b) != 0.0) sum += (rho_t(b, a) * divided(a, b) * k(a, b)).real();
      }
    }
    grad[i] = -sum;
  }
  return grad;
}

namespace {

// Exact line search on a convex φ(t) over [0, t_max] by bisection on the
// sign of φ'(t). Objective differences near the optimum are O(gap²) and drown
// in roundoff; the derivative keeps its sign resolution.
double line_search(const std::function<double(double)>& slope, double t_max, int iterations) {
  if (!(slope(0.0) < 0.0)) return 0.0;
  if (slope(t_max) <= 0.0) return t_max;
  double lo = 0.0;
  double hi = t_max;
  for (int it = 0; it < iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void clean_weights(RealVector& w) {
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w[i] < 1e-15) w[i] = 0.0;
  }
  w /= w.sum();
}

}  // namespace

OptimizerResult dc_minimize(const DensityOperator& rho, const ConvexSetModel& set,
                            const OptimizerOptions& options, const std::optional<RealVector>& start) {
  if (rho.dim() != set.dim()) throw DomainError("dc_minimize: dimension mismatch");
  const int m = set.size();

  RealVector w;
  double value;
  if (start) {
    w = *start;
    if (w.size() != m || w.minCoeff() < 0.0 || std::abs(w.sum() - 1.0) > 1e-12) {
      throw DomainError("dc_minimize: start point is not on the simplex");
    }
    value = dc_objective(rho, w, set);
    if (!std::isfinite(value)) throw DomainError("dc_minimize: start point has infinite objective");
  } else {
    value = kInfinity;
    for (int i = 0; i < m; ++i) {
      RealVector e = RealVector::Zero(m);
      e[i] = 1.0;
      const double v = dc_objective(rho, e, set);
      if (v < value) {
        value = v;
        w = e;
      }
    }
  }

  OptimizerResult result;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const RealVector g = dc_gradient(rho, w, set, GradientSupport::support_restricted);
    const double gw = g.dot(w);
    Eigen::Index fw_vertex;
    g.minCoeff(&fw_vertex);
    const double fw_gap = gw - g[fw_vertex];

    result.gap = fw_gap;
    result.gradient_norm = g.norm();
    result.iterations = iter;
    if (fw_gap <= options.tolerance) {
      result.converged = true;
      break;
    }

    Eigen::Index away_vertex = -1;
    double away_value = -kInfinity;
    for (int i = 0; i < m; ++i) {
      if (w[i] > 0.0 && g[i] > away_value) {
        away_value = g[i];
        away_vertex = i;
      }
    }
    const double away_gap = away_value - gw;

    RealVector direction = -w;
    double t_max = 1.0;
    if (away_gap > fw_gap && away_vertex >= 0 && w[away_vertex] < 1.0) {
      direction = w;
      direction[away_vertex] -= 1.0;
      t_max = w[away_vertex] / (1.0 - w[away_vertex]);
    } else {
      direction[fw_vertex] += 1.0;
    }

    const auto slope = [&](double t) {
      RealVector trial = w + t * direction;
      for (Eigen::Index i = 0; i < trial.size(); ++i) trial[i] = std::max(trial[i], 0.0);
      return dc_gradient(rho, trial, set, GradientSupport::support_restricted).dot(direction);
    };
    const double t = line_search(slope, t_max, options.line_search_iterations);
    if (t == 0.0) {
      // Directional derivative already non-negative: the gap is at roundoff level.
      result.converged = fw_gap <= std::max(options.tolerance, 1e-12 * (1.0 + std::abs(value)));
      break;
    }
    w += t * direction;
    clean_weights(w);
    value = dc_objective(rho, w, set);
    result.iterations = iter + 1;
  }
  result.value = value;
  result.weights = w;
  return result;
}

double sample_kappa(const ConvexSetModel& set, int probes, Rng& rng, const OptimizerOptions& options) {
  double best = -kInfinity;
  for (int k = 0; k < probes; ++k) {
    const DensityOperator tau = DensityOperator::pure(sample_pure_vector(set.dim(), rng));
    best = std::max(best, dc_minimize(tau, set, options).value);
  }
  return best - set.infimum();
}

}  // namespace qcont
