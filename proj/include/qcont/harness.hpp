#pragma once

// Verification campaigns over sampled states, Gibbs tables and report
// serialization (CSV with a versioned header line, or a JSON array).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qcont/gibbs.hpp"

namespace qcont {

enum class Suite { fannes, af, dc, couplings, cor_pure, gibbs, energy_bounds, tightness };
enum class ReportFormat { csv, json };

std::string_view to_string(Suite s);
Suite parse_suite(std::string_view name);
ReportFormat parse_format(std::string_view name);

inline constexpr int kReportVersion = 1;

/// Empty grids and samples = 0 mean "suite default" (see resolve_defaults).
struct CampaignConfig {
  Suite suite = Suite::fannes;
  std::vector<int> dims;
  std::vector<double> energies;
  std::vector<double> epsilons;
  std::vector<double> alphas;
  int samples = 0;
  std::uint64_t seed = 20160601;
  double tolerance = 1e-9;
  std::string output;
  ReportFormat format = ReportFormat::csv;
  int n_max = 40;            // energy_bounds: single-mode Fock cutoff
  int n_max_bipartite = 12;  // energy_bounds: Fock cutoff of A in the bipartite samples
  int dim_b = 3;             // energy_bounds: d_B of the bipartite samples
};

/// Applies one key=value setting (shared by config files and CLI flags).
/// Keys: suite, dims, energies, eps, alphas, samples, seed, tol, out, format,
/// n_max, n_max_bipartite, dim_b. Lists are comma separated.
void apply_setting(CampaignConfig& config, std::string_view key, std::string_view value);
/// Flat key=value lines; '#' starts a comment. Errors name the line.
CampaignConfig parse_config(std::istream& in, std::string_view source_name = "config");
CampaignConfig load_config(const std::string& path);
/// Fills empty grids and samples with the suite defaults and validates.
CampaignConfig resolve_defaults(CampaignConfig config);
void validate(const CampaignConfig& config);

/// One checked inequality. valid <=> lower_limit <= slack <= upper_limit.
struct CaseRecord {
  std::string check;
  int case_index = 0;
  int dim_a = 0;
  int dim_b = 0;
  double epsilon = 0.0;
  double parameter = 0.0;  // κ, α, ε', E or d, depending on the check
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double lower_limit = 0.0;
  double upper_limit = 0.0;
  bool valid = false;
  bool estimated = false;  // κ from sampling; excluded from the violation count
};

struct CampaignSummary {
  double min_slack = 0.0;
  double max_slack = 0.0;
  int violations = 0;
  int cases = 0;
  double runtime_seconds = 0.0;  // not written to report files
};

struct CampaignReport {
  Suite suite = Suite::fannes;
  std::vector<CaseRecord> records;
  CampaignSummary summary;
};

/// Runs the suite (single-threaded, deterministic case order). Case k draws
/// from an mt19937_64 seeded with mix_seed(config.seed, k). Writes the
/// report when config.output is set.
CampaignReport run_campaign(const CampaignConfig& config);

/// One family of extremal pairs from the tightness suite: "fannes", "af",
/// "oscillator" or "oscillator-conditional".
CampaignReport run_witness(std::string_view name, const CampaignConfig& config);

std::string report_csv(const CampaignReport& report);
std::string report_json(const CampaignReport& report);
void write_report(const CampaignReport& report, const std::string& path, ReportFormat format);

/// 0 = all valid, 1 = violations.
int exit_code(const CampaignReport& report);

struct GibbsRow {
  double energy = 0.0;
  bool solved = false;
  std::string status;  // "ok" or the error message
  double beta = 0.0;
  double Z = 0.0;
  double s_formula = 0.0;
  double s_direct = 0.0;
  double abs_diff = 0.0;
};

/// Unsolvable energies are kept as rows with solved = false.
std::vector<GibbsRow> gibbs_table(const HamiltonianSpec& h, const std::vector<double>& energies);
std::string gibbs_table_csv(const std::vector<GibbsRow>& rows);
std::string gibbs_table_json(const std::vector<GibbsRow>& rows);
void emit_gibbs_table(const HamiltonianSpec& h, const std::vector<double>& energies,
                      const std::string& path, ReportFormat format);

/// RFC 4180 quoting: fields with comma, quote or line break are quoted and
/// quotes doubled.
std::string csv_field(std::string_view text);
/// %.17g; nan and inf as empty fields.
std::string csv_number(double x);

}  // namespace qcont
