#ifndef MOSPSA_HARNESS_HPP
#define MOSPSA_HARNESS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mospsa/pareto.hpp"
#include "mospsa/problems.hpp"
#include "mospsa/record.hpp"
#include "mospsa/scalarize.hpp"

namespace mospsa {

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Algorithm {
  ours,                   // augmented Tchebycheff + critical history (two-objective)
                          // or critical-history SPSA (single-objective benchmarks)
  ours_weighted_sum,      // weighted-sum gradient baseline
  ours_tchebycheff_only,  // Tchebycheff without the augmentation term
  spsa_plain,             // raw SPSA, single-objective benchmarks only
  es_baseline,            // isotropic (1, population) ES, single-objective only
};

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct AblationFlags {
  bool no_history = false;
  bool no_critical_collection = false;
  bool no_direction_adjust = false;
  bool no_stepsize_adjust = false;

  bool any() const {
    return no_history || no_critical_collection || no_direction_adjust || no_stepsize_adjust;
  }
};

struct ProblemSpec {
  std::string name;  // two-quadratic | concave-front | toy-anonymizer | noisy-sphere
  std::size_t dim = 2;
  double noise_scale = 0.0;       // noisy-sphere observation noise
  std::uint64_t problem_seed = 0; // dataset synthesis / construction seed
  std::size_t n_samples = 1000;   // toy-anonymizer
  std::size_t feature_dim = 8;    // toy-anonymizer
};

struct ExperimentConfig {
  ProblemSpec problem;
  Algorithm algorithm = Algorithm::ours;
  AblationFlags ablation;
  ScalarizationConfig scalarization;
  GainSchedule gains;
  bool gains_A_auto = true;  // A = iterations / 10 unless set explicitly
  HistoryParams history;
  int iterations = 1000;
  std::vector<std::uint64_t> seeds = {1};
  long long budget = CallCounter::kUnlimited;
  bool reuse_midpoint = false;
  double threshold_fraction = 0.1;  // evaluations-to-threshold target
  EarlyStopConfig early_stop;
  EsOptions es;
  std::optional<Vec> theta0;

  void validate() const;
};

ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& config, const std::string& path);
std::string config_to_json_string(const ExperimentConfig& config);
ExperimentConfig config_from_json_string(const std::string& text);

enum class SeedStatus { ok, diverged, budget_exhausted };

struct SeedOutcome {
  std::uint64_t seed = 0;
  SeedStatus status = SeedStatus::ok;
  std::string message;
  RunResult result;
  long long blackbox_calls = 0;
  // First crossing of threshold_fraction * initial loss, in black-box calls
  // spent to *reach* that iterate; single-objective benchmarks only.
  std::optional<long long> evals_to_threshold;
  bool final_nondominated_in_trajectory = false;  // two-objective runs
};

struct RunReport {
  ExperimentConfig config;
  std::vector<SeedOutcome> outcomes;

  std::optional<long long> median_evals_to_threshold() const;
  bool all_diverged() const;
  bool all_budget_exhausted() const;
};

// One optimizer run per seed. Seeds execute concurrently on disjoint rng
// streams and fresh objective instances; a diverged seed is recorded, not
// fatal to the others.
RunReport run_experiment(const ExperimentConfig& config);

// Writes records_seed<SEED>.tsv per seed, summary.txt, and config.json.
// Output bytes depend only on (config, seeds).
void emit_report(const RunReport& report, const std::string& out_dir);

struct SweepEntry {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  ObjectivePair final_pair;
  SeedStatus status = SeedStatus::ok;
  double front_distance = 0.0;  // objective-space distance to the oracle front
  int cluster = -1;
};

struct SweepReport {
  ExperimentConfig config;
  std::vector<SweepEntry> entries;
  double cluster_tolerance = 0.05;
  int distinct_clusters = 0;
  int nondominated_clusters = 0;   // clusters within tolerance of the oracle front
  int interior_clusters = 0;       // non-dominated clusters away from both extremes
  bool extremes_only = false;      // every cluster sits at a front extreme
};

// Runs the configured algorithm once per weight pair (first seed), then maps
// the final objective pairs against the brute-force grid front of the
// problem. Two-objective analytic problems only.
SweepReport sweep_lambda(const ExperimentConfig& config,
                         const std::vector<std::pair<double, double>>& lambdas);

// Grid oracle for the analytic two-objective problems (dim-2 grids).
struct OracleFront {
  std::vector<Vec> grid;
  std::vector<ObjectivePair> pairs;
  std::vector<std::uint8_t> mask;
  int points_per_axis = 0;

  std::vector<ObjectivePair> front_pairs() const;
};
OracleFront build_oracle_front(const ProblemSpec& spec, int points_per_axis = 101);

// Theorem-1 verification wired to a config's problem and scalarization.
Theorem1Report run_verify_theorem1(const ExperimentConfig& config,
                                   const std::vector<std::pair<double, double>>& lambdas,
                                   int points_per_axis = 101);

// Builds the configured problem. Each call returns fresh objective instances
// (fresh call counters) over shared frozen data.
TwoObjectiveProblem build_problem(const ProblemSpec& spec);
bool is_single_objective(const ProblemSpec& spec);

}  // namespace mospsa

#endif
