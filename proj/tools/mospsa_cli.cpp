// Experiment runner for the mospsa toolkit.
//
//   mospsa run <config.json> [--out DIR] [--seed-override N]
//   mospsa sweep <config.json> --lambdas FILE [--out DIR]
//   mospsa verify-theorem1 <config.json> [--lambdas FILE] [--grid N]
//   mospsa report <record-file.tsv>
//
// Exit codes: 0 success, 1 config error, 2 divergence in all seeds,
// 3 budget exhausted in all seeds.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "mospsa/harness.hpp"

namespace {

using namespace mospsa;

std::vector<std::pair<double, double>> read_lambda_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open lambda file: " + path);
  std::vector<std::pair<double, double>> lambdas;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    double l1, l2;
    if (!(ss >> l1 >> l2)) throw ConfigError("bad lambda row in " + path + ": " + line);
    lambdas.emplace_back(l1, l2);
  }
  if (lambdas.empty()) throw ConfigError("lambda file is empty: " + path);
  return lambdas;
}

std::vector<std::pair<double, double>> default_lambdas(std::uint64_t seed, int count) {
  RngHandle rng(seed, 2);
  std::vector<std::pair<double, double>> lambdas;
  for (int i = 0; i < count; ++i) {
    double l1 = 0.05 + 0.9 * rng.uniform01();
    lambdas.emplace_back(l1, 1.0 - l1);
  }
  return lambdas;
}

int exit_code_for(const RunReport& report) {
  if (report.all_diverged()) return 2;
  if (report.all_budget_exhausted()) return 3;
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override) {
  ExperimentConfig config = load_config(config_path);
  if (seed_override) config.seeds = {*seed_override};
  RunReport report = run_experiment(config);
  emit_report(report, out_dir);
  for (const SeedOutcome& o : report.outcomes) {
    std::printf("seed %llu: %s, %zu steps, %lld black-box calls\n",
                static_cast<unsigned long long>(o.seed),
                o.status == SeedStatus::ok
                    ? "ok"
                    : (o.status == SeedStatus::diverged ? "diverged" : "budget-exhausted"),
                o.result.trajectory.size(), o.blackbox_calls);
  }
  auto median = report.median_evals_to_threshold();
  if (median) std::printf("median evaluations to threshold: %lld\n", *median);
  std::printf("report written to %s\n", out_dir.c_str());
  return exit_code_for(report);
}

int cmd_sweep(const std::string& config_path, const std::string& lambda_path,
              const std::string& out_dir) {
  ExperimentConfig config = load_config(config_path);
  SweepReport report = sweep_lambda(config, read_lambda_file(lambda_path));

  std::ostringstream out;
  out << "lambda1\tlambda2\tstatus\tfinal_L_blackbox\tfinal_L_whitebox\tfront_distance\tcluster\n";
  for (const SweepEntry& e : report.entries) {
    out << format_double(e.lambda1) << '\t' << format_double(e.lambda2) << '\t'
        << (e.status == SeedStatus::ok ? "ok" : "failed") << '\t'
        << format_double(e.final_pair.blackbox) << '\t' << format_double(e.final_pair.whitebox)
        << '\t' << format_double(e.front_distance) << '\t' << e.cluster << '\n';
  }
  out << "distinct_clusters\t" << report.distinct_clusters << '\n';
  out << "nondominated_clusters\t" << report.nondominated_clusters << '\n';
  out << "interior_clusters\t" << report.interior_clusters << '\n';
  out << "extremes_only\t" << (report.extremes_only ? "yes" : "no") << '\n';

  std::cout << out.str();
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream file(out_dir + "/sweep.tsv");
    file << out.str();
    save_config(report.config, out_dir + "/config.json");
  }
  return 0;
}

int cmd_verify(const std::string& config_path, const std::string& lambda_path, int grid_points) {
  ExperimentConfig config = load_config(config_path);
  std::vector<std::pair<double, double>> lambdas =
      lambda_path.empty() ? default_lambdas(config.seeds.front(), 20)
                          : read_lambda_file(lambda_path);
  Theorem1Report report = run_verify_theorem1(config, lambdas, grid_points);
  int passed = 0;
  for (const auto& e : report.entries) {
    std::printf("lambda=(%.4f, %.4f) argmin pair=(%.6f, %.6f) %s\n", e.lambda1, e.lambda2,
                e.pair.blackbox, e.pair.whitebox,
                e.nondominated ? "non-dominated" : "DOMINATED");
    if (e.nondominated) passed++;
  }
  std::printf("grid %zu points, front %zu points (relative to this grid)\n", report.grid_size,
              report.front_size);
  std::printf("non-dominated argmins: %d/%zu\n", passed, report.entries.size());
  std::printf("front coverage by dense lambda sweep: %.3f\n", report.front_coverage);
  return 0;
}

int cmd_report(const std::string& record_path) {
  RunResult result = read_record_file(record_path);
  std::printf("steps: %zu\n", result.trajectory.size());
  if (!result.trajectory.empty()) {
    const StepRecord& last = result.trajectory.back();
    std::printf("final: L_blackbox=%.9g L_whitebox=%.9g active=%d calls=%lld\n", last.l_blackbox,
                last.l_whitebox, last.active_index, last.cumulative_calls);
    double best = result.trajectory.front().l_blackbox;
    for (const StepRecord& r : result.trajectory) best = std::min(best, r.l_blackbox);
    std::printf("best L_blackbox along the run: %.9g\n", best);
  }
  if (result.truncated) std::printf("run was truncated by the black-box budget\n");
  if (result.early_stopped) std::printf("run stopped early on trajectory stabilization\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"derivative-free multi-objective optimization experiments"};
  app.require_subcommand(1);

  std::string config_path, record_path, lambda_path, out_dir = "out";
  std::optional<std::uint64_t> seed_override;
  int grid_points = 101;

  CLI::App* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "experiment config (json)")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed-override", seed_override, "replace the config's seed list");

  CLI::App* sweep = app.add_subcommand("sweep", "run once per lambda and map against the front");
  sweep->add_option("config", config_path, "experiment config (json)")->required();
  sweep->add_option("--lambdas", lambda_path, "file of 'l1 l2' rows")->required();
  sweep->add_option("--out", out_dir, "output directory (optional)");

  CLI::App* verify = app.add_subcommand("verify-theorem1", "grid-argmin non-dominance check");
  verify->add_option("config", config_path, "experiment config (json)")->required();
  verify->add_option("--lambdas", lambda_path, "file of 'l1 l2' rows (default: 20 random)");
  verify->add_option("--grid", grid_points, "grid points per axis");

  CLI::App* report = app.add_subcommand("report", "summarize a record file");
  report->add_option("records", record_path, "record file (tsv)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, seed_override);
    if (sweep->parsed()) {
      return cmd_sweep(config_path, lambda_path, sweep->count("--out") ? out_dir : "");
    }
    if (verify->parsed()) return cmd_verify(config_path, lambda_path, grid_points);
    if (report->parsed()) return cmd_report(record_path);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
