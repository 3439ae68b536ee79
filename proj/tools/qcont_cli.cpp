// qcont: command-line front end for the verification campaigns.
//
//   qcont verify <suite> [--config FILE] [--dims 2,3] [--samples N] ...
//   qcont witness <fannes|af|oscillator|oscillator-conditional> ...
//   qcont gibbs-table (--levels 0,1,2 | --modes 1,2) --energies 0.5:0.5:4
//   qcont coupling-demo --dims 3 --seed 7
//
// Exit status: 0 all checks valid, 1 violations, 2 configuration or domain error.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcont/bounds.hpp"
#include "qcont/couplings.hpp"
#include "qcont/errors.hpp"
#include "qcont/harness.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string dims, energies, eps, alphas, samples, seed, tol, out, format;
  std::string n_max, n_max_bipartite, dim_b;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "flat key=value config file");
    app->add_option("--dims", dims, "dimension grid, e.g. 2,3,4 or 2..16");
    app->add_option("--energies", energies, "energy grid, e.g. 1,2 or 0.5:0.5:4");
    app->add_option("--eps", eps, "epsilon grid");
    app->add_option("--alphas", alphas, "alpha grid for the oscillator bounds");
    app->add_option("--samples", samples, "samples per grid point");
    app->add_option("--seed", seed, "64-bit campaign seed");
    app->add_option("--tol", tol, "slack tolerance (default 1e-9)");
    app->add_option("--out", out, "report path");
    app->add_option("--format", format, "csv or json");
    app->add_option("--n-max", n_max, "single-mode Fock cutoff");
    app->add_option("--n-max-bipartite", n_max_bipartite, "Fock cutoff of A in bipartite samples");
    app->add_option("--dim-b", dim_b, "d_B of bipartite energy-constrained samples");
  }

  qcont::CampaignConfig build() const {
    qcont::CampaignConfig c = config.empty() ? qcont::CampaignConfig{} : qcont::load_config(config);
    const std::pair<const char*, const std::string*> flags[] = {
        {"dims", &dims},     {"energies", &energies}, {"eps", &eps},
        {"alphas", &alphas}, {"samples", &samples},   {"seed", &seed},
        {"tol", &tol},       {"out", &out},           {"format", &format},
        {"n_max", &n_max},   {"n_max_bipartite", &n_max_bipartite}, {"dim_b", &dim_b},
    };
    for (const auto& [key, value] : flags) {
      if (!value->empty()) qcont::apply_setting(c, key, *value);
    }
    return c;
  }
};

void print_summary(const qcont::CampaignReport& r, const std::string& label) {
  std::printf("%s: cases=%d violations=%d min_slack=%.6g max_slack=%.6g runtime=%.2fs\n", label.c_str(),
              r.summary.cases, r.summary.violations, r.summary.min_slack, r.summary.max_slack,
              r.summary.runtime_seconds);
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  qcont::CampaignConfig scratch;
  qcont::apply_setting(scratch, "energies", text);
  (void)key;
  return scratch.energies;
}

int run(int argc, char** argv) {
  CLI::App app{"Continuity bounds for entropies: verification campaigns and witnesses"};
  app.require_subcommand(1);

  Overrides verify_opts;
  std::string suite_name;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite_name,
                     "fannes | af | dc | couplings | cor_pure | gibbs | energy_bounds | tightness")
      ->required();
  verify_opts.attach(verify);

  Overrides witness_opts;
  std::string witness_name;
  auto* witness = app.add_subcommand("witness", "evaluate extremal pairs against their bounds");
  witness->add_option("name", witness_name, "fannes | af | oscillator | oscillator-conditional")->required();
  witness_opts.attach(witness);

  std::string levels, modes, table_energies, table_out, table_format = "csv";
  auto* table = app.add_subcommand("gibbs-table", "tabulate beta(E), Z and S(gamma(E))");
  table->add_option("--levels", levels, "explicit energy levels, ascending, starting at 0");
  table->add_option("--modes", modes, "oscillator mode energies");
  table->add_option("--energies", table_energies, "energy grid")->required();
  table->add_option("--out", table_out, "output path (default stdout)");
  table->add_option("--format", table_format, "csv or json");

  int demo_dim = 3;
  std::uint64_t demo_seed = 1;
  auto* demo = app.add_subcommand("coupling-demo", "build both couplings for one random pair");
  demo->add_option("--dims", demo_dim, "dimension of A");
  demo->add_option("--seed", demo_seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*verify) {
    qcont::CampaignConfig c = verify_opts.build();
    c.suite = qcont::parse_suite(suite_name);
    const qcont::CampaignReport r = qcont::run_campaign(c);
    print_summary(r, std::string(qcont::to_string(c.suite)));
    return qcont::exit_code(r);
  }
  if (*witness) {
    const qcont::CampaignConfig c = witness_opts.build();
    const qcont::CampaignReport r = qcont::run_witness(witness_name, c);
    if (c.output.empty()) {
      std::cout << (c.format == qcont::ReportFormat::csv ? qcont::report_csv(r) : qcont::report_json(r));
    }
    print_summary(r, "witness " + witness_name);
    return qcont::exit_code(r);
  }
  if (*table) {
    if (levels.empty() == modes.empty()) throw qcont::ConfigError("gibbs-table: give exactly one of --levels, --modes");
    const std::vector<double> grid = parse_list("energies", table_energies);
    qcont::HamiltonianSpec h = [&] {
      if (!levels.empty()) {
        const std::vector<double> l = parse_list("levels", levels);
        return qcont::HamiltonianSpec::levels(Eigen::Map<const qcont::RealVector>(l.data(), l.size()));
      }
      return qcont::HamiltonianSpec::oscillators(parse_list("modes", modes), 1);
    }();
    qcont::emit_gibbs_table(h, grid, table_out, qcont::parse_format(table_format));
    return 0;
  }
  if (*demo) {
    if (demo_dim < 2 || demo_dim > 8) throw qcont::ConfigError("coupling-demo: --dims must be in [2, 8]");
    qcont::Rng rng(qcont::mix_seed(demo_seed, 0));
    const auto rho = qcont::sample_state(demo_dim, demo_dim, rng);
    const auto sigma = qcont::sample_state(demo_dim, demo_dim, rng);
    const auto qc = qcont::quantum_coupling(rho, sigma);
    const auto dc = qcont::diagonal_coupling(rho, sigma);
    const int d = demo_dim;
    nlohmann::json out = {
        {"dim", d},
        {"seed", demo_seed},
        {"trace_distance", qc.epsilon},
        {"purification_coupling",
         {{"overlap_psi", qc.overlap_psi},
          {"overlap_phi", qc.overlap_phi},
          {"fidelity_psi_theta", qc.fidelity_psi_theta},
          {"fidelity_phi_theta", qc.fidelity_phi_theta},
          {"route_mismatch", qc.route_mismatch},
          {"marginal_a_error",
           qcont::max_abs(qcont::Matrix(qcont::partial_trace(qc.theta.matrix(), d, d, qcont::Subsystem::A) -
                                        rho.matrix()))},
          {"marginal_b_error",
           qcont::max_abs(qcont::Matrix(qcont::partial_trace(qc.theta.matrix(), d, d, qcont::Subsystem::B) -
                                        qcont::Matrix(sigma.matrix().transpose())))}}},
        {"diagonal_coupling",
         {{"largest_eigenvalue", dc.largest_eigenvalue},
          {"spectral_distance", dc.epsilon_mirsky},
          {"lower_bound", 1.0 - qc.epsilon}}},
    };
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const qcont::ConfigError& e) {
    std::fprintf(stderr, "qcont: %s\n", e.what());
    return 2;
  } catch (const qcont::DomainError& e) {
    std::fprintf(stderr, "qcont: %s\n", e.what());
    return 2;
  } catch (const qcont::PreconditionError& e) {
    std::fprintf(stderr, "qcont: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qcont: error: %s\n", e.what());
    return 2;
  }
}
