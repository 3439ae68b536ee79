#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "qcont/errors.hpp"
#include "qcont/harness.hpp"

using namespace qcont;

TEST_CASE("config parsing") {
  std::istringstream in(
      "# sample\n"
      "suite = fannes\n"
      "dims = 2..4\n"
      "eps = 0.1:0.1:0.3   # trailing comment\n"
      "samples=10\n"
      "seed = 42\n");
  const CampaignConfig c = parse_config(in, "test.cfg");
  CHECK(c.suite == Suite::fannes);
  CHECK(c.dims == std::vector<int>{2, 3, 4});
  REQUIRE(c.epsilons.size() == 3);
  CHECK(c.epsilons[2] == doctest::Approx(0.3));
  CHECK(c.samples == 10);
  CHECK(c.seed == 42u);
}

TEST_CASE("config errors name the line and the key") {
  std::istringstream bad("dims = 2\nsamples = many\n");
  try {
    parse_config(bad, "x.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("x.cfg:2") != std::string::npos);
    CHECK(msg.find("samples") != std::string::npos);
  }
  std::istringstream unknown("colour = blue\n");
  CHECK_THROWS_AS(parse_config(unknown), ConfigError);
  CampaignConfig c;
  CHECK_THROWS_AS(apply_setting(c, "format", "xml"), ConfigError);
  c.dims = {1};
  CHECK_THROWS_AS(validate(c), ConfigError);
  CHECK_THROWS_AS(parse_suite("nope"), ConfigError);
}

TEST_CASE("suite defaults") {
  CampaignConfig c;
  c.suite = Suite::fannes;
  const CampaignConfig r = resolve_defaults(c);
  CHECK(r.dims == std::vector<int>{2, 3, 4, 8});
  CHECK(r.samples == 5000);
}

TEST_CASE("csv helpers") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_number(std::numeric_limits<double>::quiet_NaN()).empty());
  CHECK(std::stod(csv_number(0.1)) == 0.1);
}

TEST_CASE("small campaign is deterministic") {
  CampaignConfig c;
  c.suite = Suite::af;
  c.samples = 20;
  c.seed = 9;
  const CampaignReport a = run_campaign(c);
  const CampaignReport b = run_campaign(c);
  CHECK(report_csv(a) == report_csv(b));
  CHECK(report_json(a) == report_json(b));
  CHECK(a.summary.violations == 0);
  CHECK(exit_code(a) == 0);
  CHECK(report_csv(a).rfind("# qcont-report v1 suite=af\n", 0) == 0);
  c.seed = 10;
  CHECK(report_csv(run_campaign(c)) != report_csv(a));
}

TEST_CASE("gibbs table keeps unsolvable rows") {
  const HamiltonianSpec q = HamiltonianSpec::levels(RealVector::LinSpaced(2, 0.0, 1.0));
  const std::vector<GibbsRow> rows = gibbs_table(q, {0.25, 0.75});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].solved);
  CHECK_FALSE(rows[1].solved);
  CHECK(rows[1].status != "ok");
  CHECK(gibbs_table_csv(rows).find("0.75") != std::string::npos);
}

TEST_CASE("witness dispatch") {
  CampaignConfig c;
  CHECK(run_witness("af", c).records.size() == 2);
  CHECK_THROWS_AS(run_witness("bogus", c), ConfigError);
}
