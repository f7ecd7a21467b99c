#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "mospsa/harness.hpp"

using namespace mospsa;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("mospsa_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ExperimentConfig sphere_config() {
  ExperimentConfig cfg;
  cfg.problem.name = "noisy-sphere";
  cfg.problem.dim = 10;
  cfg.problem.noise_scale = 0.05;
  cfg.algorithm = Algorithm::ours;
  cfg.iterations = 200;
  cfg.seeds = {1, 2, 3};
  return cfg;
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
  ExperimentConfig cfg = config_from_json_string(
      R"({"problem": {"name": "two-quadratic"}, "algorithm": "ours", "iterations": 50})");
  CHECK(cfg.problem.dim == 2);
  CHECK(cfg.scalarization.lambda1 == 0.5);
  CHECK(cfg.history.m == 5);
  CHECK(cfg.history.decay == 0.9);
  CHECK(cfg.gains_A_auto);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1});
  CHECK(cfg.budget == CallCounter::kUnlimited);
}

namespace {

void expect_config_error(const std::string& text, const std::string& needle) {
  try {
    config_from_json_string(text);
    FAIL("expected ConfigError mentioning '" << needle << "'");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

}  // namespace

TEST_CASE("config validation failures name the offending key") {
  expect_config_error(
      R"({"problem": {"name": "two-quadratic"}, "algorithm": "ours", "iterations": 10, "typo_key": 1})",
      "typo_key");
  expect_config_error(
      R"({"problem": {"name": "two-quadratic", "shape": 3}, "algorithm": "ours", "iterations": 10})",
      "shape");
  // ablation flags only combine with algorithm "ours"
  CHECK_THROWS_AS(config_from_json_string(
                      R"({"problem": {"name": "noisy-sphere"}, "algorithm": "spsa-plain",
                          "iterations": 10, "ablation": {"no_history": true}})"),
                  ConfigError);
  // scalarization baselines need two objectives
  CHECK_THROWS_AS(config_from_json_string(
                      R"({"problem": {"name": "noisy-sphere"}, "algorithm": "ours-weighted-sum",
                          "iterations": 10})"),
                  ConfigError);
  // single-objective baselines reject two-objective problems
  CHECK_THROWS_AS(config_from_json_string(
                      R"({"problem": {"name": "concave-front"}, "algorithm": "es-baseline",
                          "iterations": 10})"),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json_string("{nonsense"), ConfigError);
}

TEST_CASE("config round-trips bit-exactly") {
  ExperimentConfig cfg = sphere_config();
  cfg.scalarization.lambda1 = 0.7;
  cfg.scalarization.lambda2 = 0.3;
  cfg.gains.a = 0.123456789012345;
  cfg.budget = 5000;
  cfg.theta0 = Vec(10, 0.25);
  std::string text = config_to_json_string(cfg);
  ExperimentConfig back = config_from_json_string(text);
  CHECK(config_to_json_string(back) == text);
  CHECK(back.scalarization.lambda1 == 0.7);
  CHECK(back.gains.a == 0.123456789012345);
  CHECK(back.theta0 == cfg.theta0);

  fs::path dir = fresh_dir("roundtrip");
  save_config(cfg, (dir / "config.json").string());
  ExperimentConfig loaded = load_config((dir / "config.json").string());
  CHECK(config_to_json_string(loaded) == text);
  fs::remove_all(dir);
}

TEST_CASE("run_experiment produces one outcome per seed") {
  ExperimentConfig cfg = sphere_config();
  RunReport report = run_experiment(cfg);
  REQUIRE(report.outcomes.size() == 3);
  for (const SeedOutcome& o : report.outcomes) {
    CHECK(o.status == SeedStatus::ok);
    CHECK(o.result.trajectory.size() == 200);
    CHECK(o.blackbox_calls == 400);  // 2 per step
  }
  // different seeds explore differently
  CHECK(report.outcomes[0].result.theta != report.outcomes[1].result.theta);
}

TEST_CASE("es baseline calls match population x iterations") {
  ExperimentConfig cfg = sphere_config();
  cfg.algorithm = Algorithm::es_baseline;
  cfg.es.population = 6;
  cfg.iterations = 50;
  cfg.seeds = {9};
  RunReport report = run_experiment(cfg);
  CHECK(report.outcomes[0].blackbox_calls == 300);
}

TEST_CASE("two-objective run records non-domination of the final pair") {
  ExperimentConfig cfg;
  cfg.problem.name = "two-quadratic";
  cfg.algorithm = Algorithm::ours;
  cfg.iterations = 500;
  cfg.seeds = {4};
  RunReport report = run_experiment(cfg);
  CHECK(report.outcomes[0].status == SeedStatus::ok);
  CHECK(report.outcomes[0].final_nondominated_in_trajectory);
}

TEST_CASE("emit_report is byte-stable and self-consistent") {
  ExperimentConfig cfg = sphere_config();
  cfg.seeds = {1, 2};
  cfg.iterations = 60;
  RunReport report = run_experiment(cfg);

  fs::path dir_a = fresh_dir("emit_a");
  fs::path dir_b = fresh_dir("emit_b");
  emit_report(report, dir_a.string());
  emit_report(run_experiment(cfg), dir_b.string());

  for (const char* name : {"config.json", "summary.txt", "records_seed1.tsv",
                           "records_seed2.tsv"}) {
    CHECK(slurp(dir_a / name) == slurp(dir_b / name));
  }

  // record file line count: header + one row per step
  std::string records = slurp(dir_a / "records_seed1.tsv");
  std::size_t lines = static_cast<std::size_t>(std::count(records.begin(), records.end(), '\n'));
  CHECK(lines == 61);

  // summary's final values equal the last record row
  RunResult replayed = read_record_file((dir_a / "records_seed1.tsv").string());
  REQUIRE(replayed.trajectory.size() == 60);
  CHECK(replayed.trajectory.back().l_blackbox ==
        report.outcomes[0].result.trajectory.back().l_blackbox);
  CHECK(replayed.trajectory.back().cumulative_calls ==
        report.outcomes[0].result.trajectory.back().cumulative_calls);

  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("empty trajectory emits a header-only record file") {
  ExperimentConfig cfg = sphere_config();
  cfg.iterations = 0;
  cfg.seeds = {1};
  fs::path dir = fresh_dir("empty");
  emit_report(run_experiment(cfg), dir.string());
  CHECK(slurp(dir / "records_seed1.tsv") == std::string(kRecordHeader) + "\n");
  fs::remove_all(dir);
}

TEST_CASE("ablation exclusivity: inactive components leave step 1 identical") {
  ExperimentConfig base = sphere_config();
  base.iterations = 1;
  base.seeds = {5};
  RunReport ours = run_experiment(base);

  for (auto flag : {&AblationFlags::no_history, &AblationFlags::no_critical_collection,
                    &AblationFlags::no_direction_adjust, &AblationFlags::no_stepsize_adjust}) {
    ExperimentConfig ablated = base;
    ablated.ablation.*flag = true;
    RunReport variant = run_experiment(ablated);
    const StepRecord& a = ours.outcomes[0].result.trajectory[0];
    const StepRecord& b = variant.outcomes[0].result.trajectory[0];
    CHECK(a.l_blackbox == b.l_blackbox);
    CHECK(a.indicator == b.indicator);
    CHECK(a.step_size == b.step_size);
    CHECK(ours.outcomes[0].result.theta == variant.outcomes[0].result.theta);
  }
}

TEST_CASE("diverged seeds are recorded without failing the others") {
  ExperimentConfig cfg = sphere_config();
  cfg.gains.a = 1e5;  // guaranteed blow-up
  cfg.gains_A_auto = false;
  cfg.gains.A = 0.0;
  cfg.seeds = {1, 2};
  RunReport report = run_experiment(cfg);
  CHECK(report.all_diverged());
  for (const SeedOutcome& o : report.outcomes) {
    CHECK(o.status == SeedStatus::diverged);
    CHECK(o.message.find("step") != std::string::npos);
  }
}

TEST_CASE("budget exhaustion surfaces per seed") {
  ExperimentConfig cfg = sphere_config();
  cfg.budget = 21;
  RunReport report = run_experiment(cfg);
  CHECK(report.all_budget_exhausted());
  for (const SeedOutcome& o : report.outcomes) {
    CHECK(o.result.truncated);
    CHECK(o.result.trajectory.size() == 10);
  }
}

TEST_CASE("sweep over lambda maps finals against the oracle front") {
  ExperimentConfig cfg;
  cfg.problem.name = "two-quadratic";
  cfg.algorithm = Algorithm::ours;
  cfg.iterations = 400;
  cfg.seeds = {6};
  std::vector<std::pair<double, double>> lambdas;
  for (int i = 1; i <= 5; ++i) lambdas.emplace_back(i / 6.0, 1.0 - i / 6.0);
  SweepReport report = sweep_lambda(cfg, lambdas);
  REQUIRE(report.entries.size() == 5);
  for (const SweepEntry& e : report.entries) {
    CHECK(e.status == SeedStatus::ok);
    CHECK(e.front_distance < 0.25);
  }
  CHECK(report.distinct_clusters >= 1);
  CHECK_THROWS_AS(sweep_lambda(cfg, {}), ConfigError);
  CHECK_THROWS_AS(sweep_lambda(cfg, {{-0.1, 1.0}}), ConfigError);
}

TEST_CASE("theorem-1 runner wires the configured problem") {
  ExperimentConfig cfg;
  cfg.problem.name = "two-quadratic";
  cfg.algorithm = Algorithm::ours;
  cfg.iterations = 10;
  Theorem1Report report = run_verify_theorem1(cfg, {{0.5, 0.5}, {0.2, 0.8}}, 41);
  CHECK(report.entries.size() == 2);
  CHECK(report.all_nondominated());
}

#ifdef MOSPSA_CLI_PATH
TEST_CASE("cli run/report round trip and exit codes") {
  fs::path dir = fresh_dir("cli");
  ExperimentConfig cfg = sphere_config();
  cfg.iterations = 40;
  cfg.seeds = {1};
  save_config(cfg, (dir / "config.json").string());

  std::string cmd = std::string(MOSPSA_CLI_PATH) + " run " + (dir / "config.json").string() +
                    " --out " + (dir / "out").string();
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(dir / "out" / "records_seed1.tsv"));

  std::string report_cmd = std::string(MOSPSA_CLI_PATH) + " report " +
                           (dir / "out" / "records_seed1.tsv").string() + " > " +
                           (dir / "report.txt").string();
  CHECK(std::system(report_cmd.c_str()) == 0);
  CHECK(slurp(dir / "report.txt").find("steps") != std::string::npos);

  // config errors exit with 1
  std::ofstream bad(dir / "bad.json");
  bad << "{\"problem\": {\"name\": \"nope\"}, \"algorithm\": \"ours\", \"iterations\": 1}";
  bad.close();
  std::string bad_cmd = std::string(MOSPSA_CLI_PATH) + " run " + (dir / "bad.json").string() +
                        " --out " + (dir / "out2").string() + " 2>/dev/null";
  int rc = std::system(bad_cmd.c_str());
  CHECK(WEXITSTATUS(rc) == 1);
  fs::remove_all(dir);
}
#endif
