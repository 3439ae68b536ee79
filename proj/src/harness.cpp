#include "qcont/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "qcont/bounds.hpp"
#include "qcont/couplings.hpp"
#include "qcont/dc_optimizer.hpp"
#include "qcont/entropies.hpp"
#include "qcont/errors.hpp"

namespace qcont {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_double(std::string_view key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw ConfigError(std::string(key) + ": not a number: '" + text + "'");
  }
  return v;
}

long long parse_integer(std::string_view key, const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw ConfigError(std::string(key) + ": not an integer: '" + text + "'");
  }
  return v;
}

// "2,3,4" or "2..16".
std::vector<int> parse_int_list(std::string_view key, std::string_view value) {
  std::vector<int> out;
  for (const std::string& item : split(value, ',')) {
    if (item.empty()) throw ConfigError(std::string(key) + ": empty list entry");
    const auto range = item.find("..");
    if (range != std::string::npos) {
      const long long lo = parse_integer(key, trim(item.substr(0, range)));
      const long long hi = parse_integer(key, trim(item.substr(range + 2)));
      if (hi < lo) throw ConfigError(std::string(key) + ": empty range '" + item + "'");
      for (long long v = lo; v <= hi; ++v) out.push_back(static_cast<int>(v));
    } else {
      out.push_back(static_cast<int>(parse_integer(key, item)));
    }
  }
  return out;
}

// "0.1,0.2" or "start:step:stop" (stop included up to 1e-9 relative).
std::vector<double> parse_double_list(std::string_view key, std::string_view value) {
  std::vector<double> out;
  for (const std::string& item : split(value, ',')) {
    if (item.empty()) throw ConfigError(std::string(key) + ": empty list entry");
    const std::vector<std::string> parts = split(item, ':');
    if (parts.size() == 3) {
      const double start = parse_double(key, parts[0]);
      const double step = parse_double(key, parts[1]);
      const double stop = parse_double(key, parts[2]);
      if (!(step > 0.0) || stop < start) throw ConfigError(std::string(key) + ": bad range '" + item + "'");
      for (int k = 0;; ++k) {
        const double v = start + k * step;
        if (v > stop + 1e-9 * std::max(1.0, std::abs(stop))) break;
        out.push_back(v);
      }
    } else if (parts.size() == 1) {
      out.push_back(parse_double(key, item));
    } else {
      throw ConfigError(std::string(key) + ": bad entry '" + item + "'");
    }
  }
  return out;
}

std::vector<double> step_grid(double start, double step, double stop) {
  std::vector<double> g;
  for (int k = 0;; ++k) {
    const double v = start + k * step;
    if (v > stop + 1e-12) break;
    g.push_back(v);
  }
  return g;
}

}  // namespace

std::string_view to_string(Suite s) {
  switch (s) {
    case Suite::fannes: return "fannes";
    case Suite::af: return "af";
    case Suite::dc: return "dc";
    case Suite::couplings: return "couplings";
    case Suite::cor_pure: return "cor_pure";
    case Suite::gibbs: return "gibbs";
    case Suite::energy_bounds: return "energy_bounds";
    case Suite::tightness: return "tightness";
  }
  return "unknown";
}

Suite parse_suite(std::string_view name) {
  for (Suite s : {Suite::fannes, Suite::af, Suite::dc, Suite::couplings, Suite::cor_pure, Suite::gibbs,
                  Suite::energy_bounds, Suite::tightness}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("suite: unknown suite '" + std::string(name) + "'");
}

ReportFormat parse_format(std::string_view name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  throw ConfigError("format: expected csv or json, got '" + std::string(name) + "'");
}

void apply_setting(CampaignConfig& c, std::string_view key, std::string_view raw) {
  const std::string value = trim(raw);
  if (key == "suite") {
    c.suite = parse_suite(value);
  } else if (key == "dims") {
    c.dims = parse_int_list(key, value);
  } else if (key == "energies") {
    c.energies = parse_double_list(key, value);
  } else if (key == "eps") {
    c.epsilons = parse_double_list(key, value);
  } else if (key == "alphas") {
    c.alphas = parse_double_list(key, value);
  } else if (key == "samples") {
    c.samples = static_cast<int>(parse_integer(key, value));
  } else if (key == "seed") {
    std::size_t used = 0;
    try {
      c.seed = std::stoull(value, &used, 0);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) throw ConfigError("seed: not an unsigned integer: '" + value + "'");
  } else if (key == "tol") {
    c.tolerance = parse_double(key, value);
  } else if (key == "out") {
    c.output = value;
  } else if (key == "format") {
    c.format = parse_format(value);
  } else if (key == "n_max") {
    c.n_max = static_cast<int>(parse_integer(key, value));
  } else if (key == "n_max_bipartite") {
    c.n_max_bipartite = static_cast<int>(parse_integer(key, value));
  } else if (key == "dim_b") {
    c.dim_b = static_cast<int>(parse_integer(key, value));
  } else {
    throw ConfigError("unknown key '" + std::string(key) + "'");
  }
}

CampaignConfig parse_config(std::istream& in, std::string_view source_name) {
  CampaignConfig c;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    std::ostringstream where;
    where << source_name << ":" << number << ": ";
    if (eq == std::string::npos) throw ConfigError(where.str() + "expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    try {
      apply_setting(c, key, std::string_view(body).substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where.str() + e.what());
    }
  }
  return c;
}

CampaignConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  return parse_config(in, path);
}

CampaignConfig resolve_defaults(CampaignConfig c) {
  const auto fill_dims = [&](std::vector<int> d) {
    if (c.dims.empty()) c.dims = std::move(d);
  };
  const auto fill_samples = [&](int n) {
    if (c.samples == 0) c.samples = n;
  };
  switch (c.suite) {
    case Suite::fannes:
      fill_dims({2, 3, 4, 8});
      fill_samples(5000);
      break;
    case Suite::af:
      fill_dims({2, 3, 4});
      fill_samples(2000);
      break;
    case Suite::dc:
      fill_dims({2, 3});
      fill_samples(1000);
      break;
    case Suite::couplings:
      fill_dims({2, 3, 4, 5, 6});
      fill_samples(1000);
      break;
    case Suite::cor_pure:
      fill_dims({2, 3, 4});
      fill_samples(1000);
      break;
    case Suite::gibbs:
      if (c.energies.empty()) c.energies = step_grid(0.05, 0.05, 10.0);
      fill_samples(1);
      break;
    case Suite::energy_bounds:
      if (c.energies.empty()) c.energies = {2.0};
      fill_samples(500);
      break;
    case Suite::tightness:
      fill_dims({2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16});
      if (c.epsilons.empty()) c.epsilons = step_grid(0.05, 0.05, 0.95);
      if (c.energies.empty()) c.energies = {100.0};
      fill_samples(1);
      break;
  }
  if (c.alphas.empty()) c.alphas = {0.05, 0.1, 0.25, 0.5};
  validate(c);
  return c;
}

void validate(const CampaignConfig& c) {
  if (c.samples < 1) throw ConfigError("samples: must be at least 1");
  if (!(c.tolerance >= 0.0)) throw ConfigError("tol: must be non-negative");
  for (int d : c.dims) {
    if (d < 2 || d > 64) throw ConfigError("dims: entries must be in [2, 64]");
  }
  for (double e : c.energies) {
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("energies: entries must be positive");
  }
  for (double e : c.epsilons) {
    if (!(e > 0.0 && e <= 1.0)) throw ConfigError("eps: entries must be in (0, 1]");
  }
  for (double a : c.alphas) {
    if (!(a > 0.0 && a <= 0.5)) throw ConfigError("alphas: entries must be in (0, 1/2]");
  }
  if (c.n_max < 1 || c.n_max > 63) throw ConfigError("n_max: must be in [1, 63]");
  if (c.dim_b < 1) throw ConfigError("dim_b: must be positive");
  if (c.n_max_bipartite < 1 || (c.n_max_bipartite + 1) * c.dim_b > 64) {
    throw ConfigError("n_max_bipartite: (n_max_bipartite + 1) * dim_b must be at most 64");
  }
  const bool needs_dims = c.suite != Suite::gibbs && c.suite != Suite::energy_bounds;
  if (needs_dims && c.dims.empty()) throw ConfigError("dims: grid is empty");
  if ((c.suite == Suite::gibbs || c.suite == Suite::energy_bounds || c.suite == Suite::tightness) &&
      c.energies.empty()) {
    throw ConfigError("energies: grid is empty");
  }
  if (c.suite == Suite::tightness && c.epsilons.empty()) throw ConfigError("eps: grid is empty");
}

// ---------------------------------------------------------------------------

namespace {

class Recorder {
 public:
  Recorder(CampaignReport& report, double tolerance) : report_(report), tolerance_(tolerance) {}

  /// rhs - lhs >= -tolerance.
  void bound(const std::string& check, int index, int da, int db, double eps, double param,
             double lhs, double rhs, bool estimated = false) {
    add(check, index, da, db, eps, param, lhs, rhs, -tolerance_, kInfinity, estimated);
  }
  void bound(const std::string& check, int index, int da, int db, double param, const BoundReport& r) {
    add(check, index, da, db, r.params.epsilon, param, r.lhs, r.rhs, -tolerance_, kInfinity,
        r.kappa_estimated);
  }
  /// rhs - lhs >= 0; the threshold is already folded into lhs or rhs.
  void threshold(const std::string& check, int index, int da, int db, double eps, double param,
                 double lhs, double rhs) {
    add(check, index, da, db, eps, param, lhs, rhs, 0.0, kInfinity, false);
  }
  void window(const std::string& check, int index, int da, int db, double eps, double param,
              double lhs, double rhs, double lower, double upper) {
    add(check, index, da, db, eps, param, lhs, rhs, lower, upper, false);
  }
  /// A case that could not be evaluated.
  void failure(const std::string& check, int index, int da, int db) {
    add(check, index, da, db, kNaN, kNaN, kNaN, kNaN, 0.0, 0.0, false);
  }

 private:
  void add(const std::string& check, int index, int da, int db, double eps, double param, double lhs,
           double rhs, double lower, double upper, bool estimated) {
    CaseRecord r;
    r.check = check;
    r.case_index = index;
    r.dim_a = da;
    r.dim_b = db;
    r.epsilon = eps;
    r.parameter = param;
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.lower_limit = lower;
    r.upper_limit = upper;
    r.valid = r.slack >= lower && r.slack <= upper;  // false for NaN
    r.estimated = estimated;
    report_.records.push_back(std::move(r));
  }

  CampaignReport& report_;
  double tolerance_;
};

struct CaseContext {
  const CampaignConfig& config;
  Recorder& rec;
  int next_case = 0;

  Rng rng_for(int index) const { return Rng(mix_seed(config.seed, static_cast<std::uint64_t>(index))); }
};

std::vector<std::pair<int, int>> dim_pairs(const std::vector<int>& dims) {
  std::vector<std::pair<int, int>> pairs;
  for (int a : dims) {
    for (int b : dims) pairs.emplace_back(a, b);
  }
  return pairs;
}

void run_fannes(CaseContext& ctx) {
  for (int d : ctx.config.dims) {
    for (int s = 0; s < ctx.config.samples; ++s) {
      const int index = ctx.next_case++;
      Rng rng = ctx.rng_for(index);
      const DensityOperator rho = sample_state(d, d, rng);
      const DensityOperator sigma = sample_state(d, d, rng);
      ctx.rec.bound("fannes_exact", index, d, 0, d, check_fannes(rho, sigma, false));
      ctx.rec.bound("fannes_simplified", index, d, 0, d, check_fannes(rho, sigma, true));
    }
  }
}

void run_af(CaseContext& ctx) {
  const auto pairs = dim_pairs(ctx.config.dims);
  for (int s = 0; s < ctx.config.samples; ++s) {
    const int index = ctx.next_case++;
    Rng rng = ctx.rng_for(index);
    const auto [da, db] = pairs[s % pairs.size()];
    const BipartiteState rho(sample_state(da * db, da * db, rng), da, db);
    const BipartiteState sigma(sample_state(da * db, da * db, rng), da, db);
    ctx.rec.bound("af_general", index, da, db, da, check_af(rho, sigma, false));
  }
  for (int s = 0; s < ctx.config.samples; ++s) {
    const int index = ctx.next_case++;
    Rng rng = ctx.rng_for(index);
    const auto [da, db] = pairs[s % pairs.size()];
    const BipartiteState rho = sample_qc_state(da, db, rng);
    const BipartiteState sigma = sample_qc_state(da, db, rng);
    ctx.rec.bound("af_classical_B", index, da, db, da, check_af(rho, sigma, true));
  }
}

void run_dc(CaseContext& ctx) {
  const auto pairs = dim_pairs(ctx.config.dims);
  for (int s = 0; s < ctx.config.samples; ++s) {
    const int index = ctx.next_case++;
    Rng rng = ctx.rng_for(index);
    const auto [da, db] = pairs[s % pairs.size()];
    const BipartiteState rho(sample_state(da * db, da * db, rng), da, db);
    const BipartiteState sigma(sample_state(da * db, da * db, rng), da, db);
    const BoundReport r = check_dc_conditional(rho, sigma);
    ctx.rec.bound("dc_conditional", index, da, db, r.params.kappa, r);
  }
  // Finitely generated sets, m = 3 random full-rank generators, certified κ.
  const int generic = std::max(1, ctx.config.samples / 20);
  for (int s = 0; s < generic; ++s) {
    const int index = ctx.next_case++;
    Rng rng = ctx.rng_for(index);
    const int d = ctx.config.dims[s % ctx.config.dims.size()];
    std::vector<HermitianOperator> gens;
    for (int i = 0; i < 3; ++i) gens.emplace_back(sample_state(d, d, rng).matrix());
    const ConvexSetModel set(std::move(gens));
    const DensityOperator rho = sample_state(d, d, rng);
    const DensityOperator sigma = sample_state(d, d, rng);
    try {
      const BoundReport r = check_dc(rho, sigma, set);
      ctx.rec.bound("dc_generic", index, d, 0, set.kappa(), r);
    } catch (const ConvergenceError&) {
      ctx.rec.failure("dc_generic", index, d, 0);
    }
  }
}

double spectral_norm(const Matrix& m) {
  return std::sqrt(std::max(0.0, largest_eigenvalue(Matrix(m.adjoint() * m))));
}

void run_couplings(CaseContext& ctx) {
  for (int s = 0; s < ctx.config.samples; ++s) {
    const int index = ctx.next_case++;
    Rng rng = ctx.rng_for(index);
    const int d = ctx.config.dims[s % ctx.config.dims.size()];
    const DensityOperator rho = sample_state(d, d, rng);
    const DensityOperator sigma = sample_state(d, d, rng);
    Recorder& rec = ctx.rec;

    const QuantumCoupling qc = quantum_coupling(rho, sigma);
    const double eps = qc.epsilon;
    const Matrix& theta = qc.theta.matrix();
    const Matrix sigma_t = sigma.matrix().transpose();
    rec.threshold("prop1_marginal_a", index, d, d, eps, 0.0,
                  max_abs(Matrix(partial_trace(theta, d, d, Subsystem::A) - rho.matrix())), 1e-9);
    rec.threshold("prop1_marginal_b", index, d, d, eps, 0.0,
                  max_abs(Matrix(partial_trace(theta, d, d, Subsystem::B) - sigma_t)), 1e-9);
    rec.threshold("prop1_norm_x", index, d, d, eps, 0.0, spectral_norm(qc.x), 1.0 + 1e-10);
    rec.threshold("prop1_norm_y", index, d, d, eps, 0.0, spectral_norm(qc.y), 1.0 + 1e-10);
    rec.threshold("prop1_overlap_psi", index, d, d, eps, 0.0, 1.0 - eps - 1e-9, qc.overlap_psi);
    rec.threshold("prop1_overlap_phi", index, d, d, eps, 0.0, 1.0 - eps - 1e-9, qc.overlap_phi);
    rec.threshold("prop1_fidelity", index, d, d, eps, 0.0, 1.0 - eps - 1e-9, qc.fidelity_psi_theta);
    rec.threshold("prop1_routes", index, d, d, eps, 0.0, qc.route_mismatch, 1e-9);

    const DiagonalCoupling dc = diagonal_coupling(rho, sigma);
    const Matrix& omega = dc.omega.matrix();
    const double distance = trace_distance(rho, sigma);
    rec.threshold("prop2_marginal_a", index, d, d, distance, 0.0,
                  max_abs(Matrix(partial_trace(omega, d, d, Subsystem::A) - rho.matrix())), 1e-10);
    rec.threshold("prop2_marginal_b", index, d, d, distance, 0.0,
                  max_abs(Matrix(partial_trace(omega, d, d, Subsystem::B) - sigma.matrix())), 1e-10);
    rec.threshold("prop2_norm", index, d, d, distance, 0.0, 1.0 - distance - 1e-9, dc.largest_eigenvalue);
    rec.threshold("prop2_mirsky", index, d, d, distance, 0.0, 2.0 * dc.epsilon_mirsky,
                  2.0 * distance + 1e-9);
  }
}

void run_cor_pure(CaseContext& ctx) {
  for (int d : ctx.config.dims) {
    for (int s = 0; s < ctx.config.samples; ++s) {
      const int index = ctx.next_case++;
      Rng rng = ctx.rng_for(index);
      const PureBipartite phi = sample_pure_bipartite(d, d, rng);
      const PureBipartite psi = sample_pure_bipartite(d, d, rng);
      const CorPureReports r = check_cor_pure(phi, psi);
      ctx.rec.bound("ef_cor1", index, d, d, r.ef.params.delta_cor1, r.ef);
      ctx.rec.bound("ec_cor1", index, d, d, r.ec.params.delta_cor1, r.ec);
      ctx.rec.bound("er_cor2", index, d, d, d, r.er);
    }
  }
}

// Gibbs quantities on one Hamiltonian over an ascending energy grid.
void gibbs_grid_checks(CaseContext& ctx, const std::string& tag, const HamiltonianSpec& h,
                       const std::vector<double>& grid) {
  Recorder& rec = ctx.rec;
  const int dim = h.is_oscillator() ? h.mode_count() : h.dim();
  std::vector<double> entropy(grid.size()), beta(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const int index = ctx.next_case++;
    const double e = grid[k];
    const GibbsSolution sol = solve_beta(h, e);
    entropy[k] = sol.entropy;
    beta[k] = sol.beta;
    rec.threshold(tag + "_formula_vs_direct", index, dim, 0, 0.0, e,
                  std::abs(sol.entropy - direct_entropy(h, sol)), 1e-9);
    rec.threshold(tag + "_energy_residual", index, dim, 0, 0.0, e,
                  std::abs(mean_energy(h, sol.beta) - e) / e, 1e-9);
    if (h.is_oscillator() && h.mode_count() == 1 && h.omegas()[0] == 1.0) {
      rec.threshold(tag + "_g_match", index, dim, 0, 0.0, e, std::abs(sol.entropy - gibbs_entropy_g(e)), 1e-9);
    }
    if (h.is_oscillator()) {
      rec.threshold(tag + "_upper", index, dim, 0, 0.0, e, sol.entropy,
                    oscillator_entropy_upper(h.omegas(), e) + 1e-9);
    }
  }
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const int index = ctx.next_case++;
    rec.threshold(tag + "_increasing", index, dim, 0, 0.0, grid[k], 1e-12, entropy[k + 1] - entropy[k]);
    rec.threshold(tag + "_beta_decreasing", index, dim, 0, 0.0, grid[k], 0.0, beta[k] - beta[k + 1]);
  }
  for (std::size_t k = 0; k + 2 < grid.size(); ++k) {
    const int index = ctx.next_case++;
    const double mid = 0.5 * (grid[k] + grid[k + 2]);
    rec.threshold(tag + "_midpoint_concave", index, dim, 0, 0.0, mid,
                  0.5 * (entropy[k] + entropy[k + 2]) - 1e-9, gibbs_entropy(h, mid));
  }
}

void run_gibbs(CaseContext& ctx) {
  Recorder& rec = ctx.rec;
  std::vector<double> grid = ctx.config.energies;
  std::sort(grid.begin(), grid.end());
  gibbs_grid_checks(ctx, "mode", HamiltonianSpec::single_mode(1.0, 1), grid);

  // Two-level system: energies must stay below the level average 1/2.
  std::vector<double> two_level;
  for (std::size_t k = 1; k <= grid.size(); ++k) two_level.push_back(0.5 * double(k) / double(grid.size() + 1));
  const HamiltonianSpec qubit = HamiltonianSpec::levels(RealVector::LinSpaced(2, 0.0, 1.0));
  gibbs_grid_checks(ctx, "two_level", qubit, two_level);

  // Maximum-entropy allocation over two modes: S(γ(E)) of the pair is the
  // best split of E between the modes.
  const HamiltonianSpec pair = HamiltonianSpec::oscillators({1.0, 2.0}, 1);
  for (double e : {1.0, 4.0, 10.0}) {
    const int index = ctx.next_case++;
    double best = 0.0;
    const int steps = 4000;
    for (int k = 0; k <= steps; ++k) {
      const double e1 = e * k / steps;
      best = std::max(best, gibbs_entropy_g(e1 / 1.0) + gibbs_entropy_g((e - e1) / 2.0));
    }
    rec.threshold("pair_allocation", index, 2, 0, 0.0, e, best, gibbs_entropy(pair, e) + 1e-9);
  }

  // sup_{0<λ<=δ} λ S(γ(E/λ)) is attained at λ = δ.
  const HamiltonianSpec mode = HamiltonianSpec::single_mode(1.0, 1);
  for (double e : {0.5, 1.0, 2.0}) {
    for (double delta : {0.5, 0.25, 0.1, 0.01}) {
      const int index = ctx.next_case++;
      double best = 0.0;
      const int steps = 400;
      for (int k = 1; k <= steps; ++k) {
        const double lambda = delta * k / steps;
        best = std::max(best, lambda * gibbs_entropy(mode, e / lambda));
      }
      rec.threshold("cutoff_sup", index, 1, 0, delta, e, best, delta * gibbs_entropy(mode, e / delta) + 1e-12);
    }
  }

  // δ S(γ(E/δ)) → 0 along δ = 2^-k.
  double previous = gibbs_entropy(mode, 1.0);
  for (int k = 1; k <= 20; ++k) {
    const int index = ctx.next_case++;
    const double delta = std::ldexp(1.0, -k);
    const double value = delta * gibbs_entropy(mode, 1.0 / delta);
    rec.threshold("vanishing_remainder", index, 1, 0, delta, 1.0, 0.0, previous - value);
    if (k == 20) rec.threshold("vanishing_remainder_final", index, 1, 0, delta, 1.0, value, 0.05);
    previous = value;
  }
}

std::vector<double> epsilon_prime_grid(double eps) {
  std::vector<double> grid;
  for (int k = 1;; ++k) {
    const double ep = eps + 0.05 * k;
    if (ep > 1.0) break;
    grid.push_back(ep);
  }
  if (grid.empty() && eps < 1.0) grid.push_back(1.0);
  return grid;
}

void run_energy_bounds(CaseContext& ctx) {
  const CampaignConfig& c = ctx.config;
  Recorder& rec = ctx.rec;
  const HamiltonianSpec single = HamiltonianSpec::single_mode(1.0, c.n_max);
  const HamiltonianSpec part_a = HamiltonianSpec::single_mode(1.0, c.n_max_bipartite);
  for (double e : c.energies) {
    for (int s = 0; s < c.samples; ++s) {
      const int index = ctx.next_case++;
      Rng rng = ctx.rng_for(index);
      const EnergySampler mode = s % 2 == 0 ? EnergySampler::with_tail : EnergySampler::low_levels;
      const DensityOperator rho = sample_energy_constrained(single, e, rng, mode);
      const DensityOperator other = sample_energy_constrained(single, e, rng, mode);
      const double t = uniform01(rng);
      const DensityOperator sigma(Matrix((1.0 - t) * rho.matrix() + t * other.matrix()));
      const int d = single.dim();

      rec.bound("lemma4", index, d, 0, e, check_lemma4(rho, sigma, single, e));
      CutoffPipeline pipeline(rho, sigma, single, e);
      for (double ep : epsilon_prime_grid(pipeline.epsilon())) {
        const EnergyBoundCheck chk = pipeline.check(ep);
        rec.bound("meta5", index, d, 0, ep, chk.report);
        rec.bound("meta5_steps", index, d, 0, pipeline.epsilon(), ep, 0.0, chk.steps.min());
      }
      for (double a : c.alphas) rec.bound("lemma7_entropy", index, d, 0, a, check_lemma7(rho, sigma, single, e, a));
    }
    for (int s = 0; s < c.samples; ++s) {
      const int index = ctx.next_case++;
      Rng rng = ctx.rng_for(index);
      const EnergySampler mode = s % 2 == 0 ? EnergySampler::with_tail : EnergySampler::low_levels;
      const BipartiteState rho = sample_energy_constrained(part_a, e, c.dim_b, rng, mode);
      const BipartiteState other = sample_energy_constrained(part_a, e, c.dim_b, rng, mode);
      const double t = uniform01(rng);
      const BipartiteState sigma(DensityOperator(Matrix((1.0 - t) * rho.matrix() + t * other.matrix())),
                                 part_a.dim(), c.dim_b);
      const int da = part_a.dim();

      CutoffPipeline pipeline(rho, sigma, part_a, e);
      for (double ep : epsilon_prime_grid(pipeline.epsilon())) {
        const EnergyBoundCheck chk = pipeline.check(ep);
        rec.bound("meta6", index, da, c.dim_b, ep, chk.report);
        rec.bound("meta6_steps", index, da, c.dim_b, pipeline.epsilon(), ep, 0.0, chk.steps.min());
      }
      for (double a : c.alphas) {
        rec.bound("lemma7_conditional", index, da, c.dim_b, a, check_lemma7(rho, sigma, part_a, e, a));
      }
    }
  }
}

void witness_fannes(CaseContext& ctx) {
  const CampaignConfig& c = ctx.config;
  for (int d : c.dims) {
    std::vector<double> eps;
    for (double e : c.epsilons) {
      if (e < 1.0 - 1.0 / d - 1e-12) eps.push_back(e);
    }
    eps.push_back(1.0 - 1.0 / d);
    for (double e : eps) {
      const int index = ctx.next_case++;
      const auto [rho, sigma] = tightness_witness_fannes(d, e);
      const BoundReport r = check_fannes(rho, sigma, false);
      ctx.rec.window("fannes_tight", index, d, 0, r.params.epsilon, e, r.lhs, r.rhs, -1e-10, 1e-10);
    }
  }
}

void witness_af(CaseContext& ctx) {
  const int d = 8;
  const double e = 0.1;
  const int index = ctx.next_case++;
  const auto [rho, sigma] = tightness_witness_af(d, e);
  const BoundReport r = check_af(rho, sigma, false);
  ctx.rec.window("af_near_tight", index, d, d, r.params.epsilon, e, r.lhs, r.rhs, 0.0, 0.02);
  const double closed = e * std::log2(double(d * d - 1)) + binary_entropy(e);
  ctx.rec.threshold("af_gap_closed_form", index, d, d, r.params.epsilon, e, std::abs(r.lhs - closed), 1e-9);
}

void witness_oscillator(CaseContext& ctx) {
  Recorder& rec = ctx.rec;
  const HamiltonianSpec mode = HamiltonianSpec::single_mode(1.0, 1);
  for (double energy_value : ctx.config.energies) {
    const double e = 0.2;
    const int index = ctx.next_case++;
    const OscillatorWitness w = oscillator_tightness_witness(1.0, energy_value, e);
    const int n = w.n_max + 1;
    const double rhs = lemma4_bound(mode, energy_value, e);
    rec.bound("osc_gap_lower", index, n, 0, e, energy_value, e * gibbs_entropy_g(energy_value), w.gap);
    rec.bound("osc_lemma4", index, n, 0, e, energy_value, w.gap, rhs);
    rec.threshold("osc_lemma4_ratio", index, n, 0, e, energy_value, rhs / w.gap, 3.0);
    rec.threshold("osc_energy", index, n, 0, e, energy_value, w.energy_sigma, energy_value * (1.0 + 1e-12));
    for (double a : ctx.config.alphas) {
      const Lemma7Bounds b = lemma7_bounds({1.0}, energy_value, w.trace_distance, a);
      rec.bound("osc_lemma7", index, n, 0, w.trace_distance, a, w.gap, b.entropy_rhs);
    }
  }
}

void witness_oscillator_conditional(CaseContext& ctx) {
  Recorder& rec = ctx.rec;
  const HamiltonianSpec mode = HamiltonianSpec::single_mode(1.0, 1);
  for (WitnessTau tau : {WitnessTau::gibbs, WitnessTau::vacuum}) {
    const double energy_value = 2.0;
    const int n_max = 64;
    const int index = ctx.next_case++;
    const ConditionalWitness w = oscillator_conditional_witness(1.0, energy_value, 0.2, n_max, tau);
    const std::string tag = tau == WitnessTau::gibbs ? "osc_cond_gibbs" : "osc_cond_vacuum";
    rec.threshold(tag + "_energy", index, n_max + 1, n_max + 1, w.trace_distance, energy_value,
                  w.energy_sigma, energy_value * (1.0 + 1e-12));
    for (double ep : epsilon_prime_grid(w.trace_distance)) {
      rec.bound(tag + "_meta6", index, n_max + 1, n_max + 1, w.trace_distance, ep, w.gap,
                meta6_bound(mode, energy_value, w.trace_distance, ep));
    }
    for (double a : ctx.config.alphas) {
      const Lemma7Bounds b = lemma7_bounds({1.0}, energy_value, w.trace_distance, a);
      rec.bound(tag + "_lemma7", index, n_max + 1, n_max + 1, w.trace_distance, a, w.gap, b.conditional_rhs);
    }
  }
}

void run_tightness(CaseContext& ctx) {
  witness_fannes(ctx);
  witness_af(ctx);
  witness_oscillator(ctx);
  witness_oscillator_conditional(ctx);
}

void summarize(CampaignReport& report) {
  CampaignSummary& s = report.summary;
  s.cases = static_cast<int>(report.records.size());
  s.min_slack = kInfinity;
  s.max_slack = -kInfinity;
  s.violations = 0;
  for (const CaseRecord& r : report.records) {
    if (std::isfinite(r.slack)) {
      s.min_slack = std::min(s.min_slack, r.slack);
      s.max_slack = std::max(s.max_slack, r.slack);
    }
    if (!r.valid && !r.estimated) ++s.violations;
  }
  if (report.records.empty()) s.min_slack = s.max_slack = 0.0;
}

}  // namespace

CampaignReport run_campaign(const CampaignConfig& raw) {
  const CampaignConfig config = resolve_defaults(raw);
  const auto start = std::chrono::steady_clock::now();
  CampaignReport report;
  report.suite = config.suite;
  Recorder rec(report, config.tolerance);
  CaseContext ctx{config, rec};
  switch (config.suite) {
    case Suite::fannes: run_fannes(ctx); break;
    case Suite::af: run_af(ctx); break;
    case Suite::dc: run_dc(ctx); break;
    case Suite::couplings: run_couplings(ctx); break;
    case Suite::cor_pure: run_cor_pure(ctx); break;
    case Suite::gibbs: run_gibbs(ctx); break;
    case Suite::energy_bounds: run_energy_bounds(ctx); break;
    case Suite::tightness: run_tightness(ctx); break;
  }
  summarize(report);
  report.summary.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!config.output.empty()) write_report(report, config.output, config.format);
  return report;
}

CampaignReport run_witness(std::string_view name, const CampaignConfig& raw) {
  CampaignConfig base = raw;
  base.suite = Suite::tightness;
  const CampaignConfig config = resolve_defaults(base);
  CampaignReport report;
  report.suite = Suite::tightness;
  Recorder rec(report, config.tolerance);
  CaseContext ctx{config, rec};
  if (name == "fannes") {
    witness_fannes(ctx);
  } else if (name == "af") {
    witness_af(ctx);
  } else if (name == "oscillator") {
    witness_oscillator(ctx);
  } else if (name == "oscillator-conditional") {
    witness_oscillator_conditional(ctx);
  } else {
    throw ConfigError("witness: unknown witness '" + std::string(name) +
                      "' (fannes, af, oscillator, oscillator-conditional)");
  }
  summarize(report);
  if (!config.output.empty()) write_report(report, config.output, config.format);
  return report;
}

// ---------------------------------------------------------------------------

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string csv_number(double x) {
  if (!std::isfinite(x)) return {};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

nlohmann::json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

}  // namespace

std::string report_csv(const CampaignReport& report) {
  std::ostringstream out;
  out << "# qcont-report v" << kReportVersion << " suite=" << to_string(report.suite) << "\n";
  out << "suite,case,check,dim_a,dim_b,epsilon,parameter,lhs,rhs,slack,valid,estimated\n";
  const std::string suite = csv_field(to_string(report.suite));
  for (const CaseRecord& r : report.records) {
    out << suite << ',' << r.case_index << ',' << csv_field(r.check) << ',' << r.dim_a << ',' << r.dim_b
        << ',' << csv_number(r.epsilon) << ',' << csv_number(r.parameter) << ',' << csv_number(r.lhs) << ','
        << csv_number(r.rhs) << ',' << csv_number(r.slack) << ',' << (r.valid ? "true" : "false") << ','
        << (r.estimated ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string report_json(const CampaignReport& report) {
  nlohmann::json records = nlohmann::json::array();
  const std::string suite(to_string(report.suite));
  for (const CaseRecord& r : report.records) {
    records.push_back({{"suite", suite},
                       {"case", r.case_index},
                       {"check", r.check},
                       {"dim_a", r.dim_a},
                       {"dim_b", r.dim_b},
                       {"epsilon", json_number(r.epsilon)},
                       {"parameter", json_number(r.parameter)},
                       {"lhs", json_number(r.lhs)},
                       {"rhs", json_number(r.rhs)},
                       {"slack", json_number(r.slack)},
                       {"valid", r.valid},
                       {"estimated", r.estimated}});
  }
  return records.dump(1) + "\n";
}

void write_report(const CampaignReport& report, const std::string& path, ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open report file for writing");
  out << (format == ReportFormat::csv ? report_csv(report) : report_json(report));
  if (!out) throw std::runtime_error(path + ": write failed");
}

int exit_code(const CampaignReport& report) { return report.summary.violations > 0 ? 1 : 0; }

// ---------------------------------------------------------------------------

std::vector<GibbsRow> gibbs_table(const HamiltonianSpec& h, const std::vector<double>& energies) {
  std::vector<GibbsRow> rows;
  for (double e : energies) {
    GibbsRow row;
    row.energy = e;
    try {
      const GibbsSolution sol = solve_beta(h, e);
      row.beta = sol.beta;
      row.Z = sol.Z;
      row.s_formula = sol.entropy;
      row.s_direct = direct_entropy(h, sol);
      row.abs_diff = std::abs(row.s_formula - row.s_direct);
      row.solved = true;
      row.status = "ok";
    } catch (const std::exception& ex) {
      row.beta = row.Z = row.s_formula = row.s_direct = row.abs_diff = kNaN;
      row.status = ex.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string gibbs_table_csv(const std::vector<GibbsRow>& rows) {
  std::ostringstream out;
  out << "# qcont-gibbs-table v" << kReportVersion << "\n";
  out << "E,beta,Z,S_formula,S_direct,abs_diff,status\n";
  for (const GibbsRow& r : rows) {
    out << csv_number(r.energy) << ',' << csv_number(r.beta) << ',' << csv_number(r.Z) << ','
        << csv_number(r.s_formula) << ',' << csv_number(r.s_direct) << ',' << csv_number(r.abs_diff) << ','
        << csv_field(r.status) << '\n';
  }
  return out.str();
}

std::string gibbs_table_json(const std::vector<GibbsRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const GibbsRow& r : rows) {
    out.push_back({{"E", json_number(r.energy)},
                   {"beta", json_number(r.beta)},
                   {"Z", json_number(r.Z)},
                   {"S_formula", json_number(r.s_formula)},
                   {"S_direct", json_number(r.s_direct)},
                   {"abs_diff", json_number(r.abs_diff)},
                   {"status", r.status}});
  }
  return out.dump(1) + "\n";
}

void emit_gibbs_table(const HamiltonianSpec& h, const std::vector<double>& energies,
                      const std::string& path, ReportFormat format) {
  const auto rows = gibbs_table(h, energies);
  const std::string text = format == ReportFormat::csv ? gibbs_table_csv(rows) : gibbs_table_json(rows);
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open output file");
  out << text;
}

}  // namespace qcont
