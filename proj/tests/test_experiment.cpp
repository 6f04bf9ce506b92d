#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "knapq/experiment.hpp"
#include "knapq/local_solver.hpp"

using namespace knapq;
using nlohmann::json;

namespace {

InstanceSource generated(GenProfile profile, size_t n, uint64_t nonce = 0) {
  InstanceSource src;
  GenSpec spec;
  spec.profile = profile;
  spec.n = n;
  spec.seed = RandomnessPlan::seed_from_hex("e8e8");
  spec.nonce = nonce;
  src.gen = spec;
  return src;
}

ExperimentConfig base_config(ExperimentKind kind) {
  ExperimentConfig config;
  config.kind = kind;
  config.seed = RandomnessPlan::seed_from_hex("0451");
  return config;
}

}  // namespace

TEST_CASE("the default epsilon grid ends at the practical floor") {
  const auto grid = default_epsilons();
  REQUIRE(grid.size() == 4);
  CHECK(grid[0] == Rational::ratio(1, 2));
  CHECK(grid[3] == Rational::ratio(1, 8));
}

TEST_CASE("consistency rows carry the derived parameters and reproduce byte-for-byte") {
  auto config = base_config(ExperimentKind::consistency);
  config.sources = {generated(GenProfile::uniform, 50)};
  config.epsilons = {Rational::ratio(1, 2)};
  config.trials = 25;

  const auto result = run_experiment(config);
  REQUIRE(result.rows.size() == 1);
  const auto row = json::parse(result.rows[0]);
  CHECK(row.at("schema") == "knapq-report-v1");
  CHECK(row.at("kind") == "consistency");
  CHECK(row.at("instance") == "uniform-n50-k0");
  CHECK(row.at("n") == 50);
  CHECK(row.at("epsilon") == "1/2");

  const auto cfg = LcaConfig::derive(Rational::ratio(1, 2));
  CHECK(row.at("params").at("m") == cfg.m);
  CHECK(row.at("params").at("n_rq") == cfg.n_rq);
  CHECK(row.at("params").at("tau") == cfg.tau.str());

  const auto& metrics = row.at("metrics");
  CHECK(metrics.at("pairs") == 25);
  const double rate = metrics.at("consistency_rate").get<double>();
  CHECK(rate >= 0.0);
  CHECK(rate <= 1.0);
  CHECK(metrics.at("probes_per_query") == 50.0);
  CHECK(row.at("check").at("ok").get<bool>() == result.check_ok);
  CHECK(result.check_ok);

  CHECK(run_experiment(config).rows == result.rows);
}

TEST_CASE("reports append one line per row") {
  auto config = base_config(ExperimentKind::querycount);
  config.sources = {generated(GenProfile::uniform, 50)};
  config.epsilons = {Rational::ratio(1, 2)};
  config.trials = 2;
  config.out_path = "experiment_tmp.jsonl";

  std::remove(config.out_path.c_str());
  run_experiment(config);
  run_experiment(config);
  std::ifstream in(config.out_path);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  in.close();
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == lines[1]);

  const auto csv = summarize_report_file(config.out_path);
  std::remove(config.out_path.c_str());
  CHECK(csv.find("kind,instance,n,epsilon,trials") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(csv.find("querycount,uniform-n50-k0,50,1/2,2") != std::string::npos);
}

TEST_CASE("approximation rows compare against the exact optimum") {
  auto config = base_config(ExperimentKind::approx);
  config.sources = {generated(GenProfile::uniform, 60), generated(GenProfile::mixed, 60)};
  config.epsilons = {Rational::ratio(1, 2)};
  config.trials = 30;

  const auto result = run_experiment(config);
  REQUIRE(result.rows.size() == 2);
  for (const auto& text : result.rows) {
    const auto metrics = json::parse(text).at("metrics");
    CHECK(metrics.at("oracle_ok") == true);
    // The bound is vacuous at this epsilon, so every trial succeeds; the
    // mean ratio still has to be a genuine value fraction.
    CHECK(metrics.at("approx_success_rate") == 1.0);
    CHECK(metrics.at("feasibility_violations") == 0);
    const double ratio = metrics.at("mean_ratio").get<double>();
    CHECK(ratio >= 0.0);
    CHECK(ratio <= 1.0);
  }
  // The heavy pair is always sampled, so those runs keep real value.
  CHECK(json::parse(result.rows[1]).at("metrics").at("mean_ratio").get<double>() > 0.25);
  CHECK(result.check_ok);
}

TEST_CASE("an oversized oracle budget marks the row instead of failing") {
  auto config = base_config(ExperimentKind::approx);
  InstanceSource src;
  src.label = "giant";
  src.path = "approx_giant_tmp.json";
  {
    std::ofstream out(src.path);
    out << R"({"capacity":1500000000,"items":[{"p":1,"w":1},)"
        << R"({"p":1,"w":1500000000},{"p":1,"w":1500000000}]})";
  }
  config.sources = {src};
  config.epsilons = {Rational::ratio(1, 2)};
  config.trials = 3;

  const auto result = run_experiment(config);
  std::remove(src.path.c_str());
  REQUIRE(result.rows.size() == 1);
  const auto row = json::parse(result.rows[0]);
  CHECK(row.at("params").is_null());
  CHECK(row.at("metrics").at("oracle_ok") == false);
  CHECK(row.at("check").at("ok") == true);
  CHECK(result.check_ok);
}

TEST_CASE("query counts are flat across instance sizes at fixed epsilon") {
  auto config = base_config(ExperimentKind::querycount);
  config.sources = {generated(GenProfile::uniform, 50), generated(GenProfile::uniform, 200, 1)};
  config.epsilons = {Rational::ratio(1, 3)};
  config.trials = 5;

  const auto result = run_experiment(config);
  REQUIRE(result.rows.size() == 2);
  const auto cfg = LcaConfig::derive(Rational::ratio(1, 3));
  // No item is large here, so the second stage draws ceil(3 n_rq / 2) on
  // every run and the total is m plus that.
  const uint64_t expected = cfg.m + (3 * cfg.n_rq + 1) / 2;
  for (const auto& text : result.rows) {
    const auto metrics = json::parse(text).at("metrics");
    CHECK(metrics.at("samples_constant") == true);
    CHECK(metrics.at("samples_min") == expected);
    CHECK(metrics.at("samples_max") == expected);
  }
  CHECK(result.check_ok);
}

TEST_CASE("diverging query counts across instances trip the cross-row check") {
  auto config = base_config(ExperimentKind::querycount);
  config.sources = {generated(GenProfile::uniform, 50), generated(GenProfile::mixed, 100)};
  config.epsilons = {Rational::ratio(1, 3)};
  config.trials = 3;

  const auto result = run_experiment(config);
  REQUIRE(result.rows.size() == 2);
  // Each row is internally constant; only the cross-instance comparison fails.
  for (const auto& text : result.rows) {
    const auto row = json::parse(text);
    CHECK(row.at("metrics").at("samples_constant") == true);
    CHECK(row.at("check").at("ok") == true);
  }
  CHECK_FALSE(result.check_ok);
}

TEST_CASE("configs are validated") {
  auto config = base_config(ExperimentKind::consistency);
  CHECK_THROWS_AS(run_experiment(config), std::invalid_argument);
  config.sources = {generated(GenProfile::uniform, 50)};
  config.epsilons = {};
  CHECK_THROWS_AS(run_experiment(config), std::invalid_argument);
  config.epsilons = {Rational(2)};
  CHECK_THROWS_AS(run_experiment(config), std::invalid_argument);
  config.epsilons = {Rational::ratio(1, 2)};
  config.trials = 0;
  CHECK_THROWS_AS(run_experiment(config), std::invalid_argument);
  CHECK_THROWS_AS(experiment_kind_from_name("bogus"), std::invalid_argument);
  CHECK(experiment_kind_from_name("approx") == ExperimentKind::approx);
}
