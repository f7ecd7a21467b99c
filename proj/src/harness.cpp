#include "mospsa/harness.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace mospsa {

using nlohmann::json;

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::ours: return "ours";
    case Algorithm::ours_weighted_sum: return "ours-weighted-sum";
    case Algorithm::ours_tchebycheff_only: return "ours-tchebycheff-only";
    case Algorithm::spsa_plain: return "spsa-plain";
    case Algorithm::es_baseline: return "es-baseline";
  }
  throw std::logic_error("algorithm_name: unknown algorithm");
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "ours") return Algorithm::ours;
  if (name == "ours-weighted-sum") return Algorithm::ours_weighted_sum;
  if (name == "ours-tchebycheff-only") return Algorithm::ours_tchebycheff_only;
  if (name == "spsa-plain") return Algorithm::spsa_plain;
  if (name == "es-baseline") return Algorithm::es_baseline;
  throw ConfigError("unknown algorithm '" + name + "'");
}

bool is_single_objective(const ProblemSpec& spec) { return spec.name == "noisy-sphere"; }

void ExperimentConfig::validate() const {
  static const std::vector<std::string> known = {"two-quadratic", "concave-front",
                                                 "toy-anonymizer", "noisy-sphere"};
  if (std::find(known.begin(), known.end(), problem.name) == known.end()) {
    throw ConfigError("unknown problem '" + problem.name + "'");
  }
  if (problem.dim == 0) throw ConfigError("problem.dim must be >= 1");
  if (problem.name == "concave-front" && problem.dim < 2) {
    throw ConfigError("concave-front needs problem.dim >= 2");
  }
  if (problem.noise_scale < 0.0) throw ConfigError("problem.noise_scale must be >= 0");
  if (iterations < 0) throw ConfigError("iterations must be >= 0");
  if (seeds.empty()) throw ConfigError("seeds must not be empty");
  if (!(threshold_fraction > 0.0 && threshold_fraction <= 1.0)) {
    throw ConfigError("threshold_fraction must lie in (0, 1]");
  }
  if (budget != CallCounter::kUnlimited && budget < 1) {
    throw ConfigError("budget must be positive or null");
  }
  if (ablation.any() && algorithm != Algorithm::ours) {
    throw ConfigError("ablation flags are only valid with algorithm 'ours'");
  }
  bool single = is_single_objective(problem);
  if (single && (algorithm == Algorithm::ours_weighted_sum ||
                 algorithm == Algorithm::ours_tchebycheff_only)) {
    throw ConfigError("algorithm '" + algorithm_name(algorithm) +
                      "' needs a two-objective problem");
  }
  if (!single && (algorithm == Algorithm::spsa_plain || algorithm == Algorithm::es_baseline)) {
    throw ConfigError("algorithm '" + algorithm_name(algorithm) +
                      "' runs on single-objective benchmarks only");
  }
  if (es.population < 2) throw ConfigError("es.population must be >= 2");
  if (!(es.step_scale > 0.0)) throw ConfigError("es.step_scale must be > 0");
  try {
    scalarization.validate();
    GainSchedule g = gains;
    if (gains_A_auto) g.A = static_cast<double>(iterations) / 10.0;
    g.validate();
    history.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (theta0) {
    std::size_t expect = problem.name == "toy-anonymizer"
                             ? toy::theta_dim(problem.feature_dim)
                             : problem.dim;
    if (theta0->size() != expect) throw ConfigError("theta0 has the wrong dimension");
    if (!all_finite(*theta0)) throw ConfigError("theta0 must be finite");
  }
}

// --- json ---------------------------------------------------------------------

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* context) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("unknown key '" + item.key() + "' in " + context);
    }
  }
}

template <typename T>
void read_into(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig config_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  ExperimentConfig cfg;
  try {
    check_keys(j,
               {"problem", "algorithm", "ablation", "scalarization", "gains", "history",
                "iterations", "seeds", "budget", "reuse_midpoint", "threshold_fraction",
                "early_stop", "es", "theta0"},
               "config");
    if (!j.contains("problem")) throw ConfigError("missing required key 'problem'");
    if (!j.contains("algorithm")) throw ConfigError("missing required key 'algorithm'");
    if (!j.contains("iterations")) throw ConfigError("missing required key 'iterations'");

    const json& p = j.at("problem");
    check_keys(p, {"name", "dim", "noise_scale", "problem_seed", "n_samples", "feature_dim"},
               "problem");
    if (!p.contains("name")) throw ConfigError("missing required key 'problem.name'");
    cfg.problem.name = p.at("name").get<std::string>();
    read_into(p, "dim", cfg.problem.dim);
    read_into(p, "noise_scale", cfg.problem.noise_scale);
    read_into(p, "problem_seed", cfg.problem.problem_seed);
    read_into(p, "n_samples", cfg.problem.n_samples);
    read_into(p, "feature_dim", cfg.problem.feature_dim);

    cfg.algorithm = algorithm_from_name(j.at("algorithm").get<std::string>());

    if (j.contains("ablation")) {
      const json& a = j.at("ablation");
      check_keys(a,
                 {"no_history", "no_critical_collection", "no_direction_adjust",
                  "no_stepsize_adjust"},
                 "ablation");
      read_into(a, "no_history", cfg.ablation.no_history);
      read_into(a, "no_critical_collection", cfg.ablation.no_critical_collection);
      read_into(a, "no_direction_adjust", cfg.ablation.no_direction_adjust);
      read_into(a, "no_stepsize_adjust", cfg.ablation.no_stepsize_adjust);
    }

    if (j.contains("scalarization")) {
      const json& s = j.at("scalarization");
      check_keys(s, {"lambda", "ideal_point", "epsilon", "sigma", "track_ideal"},
                 "scalarization");
      if (s.contains("lambda")) {
        auto l = s.at("lambda").get<std::vector<double>>();
        if (l.size() != 2) throw ConfigError("scalarization.lambda must have two entries");
        cfg.scalarization.lambda1 = l[0];
        cfg.scalarization.lambda2 = l[1];
      }
      if (s.contains("ideal_point")) {
        auto z = s.at("ideal_point").get<std::vector<double>>();
        if (z.size() != 2) throw ConfigError("scalarization.ideal_point must have two entries");
        cfg.scalarization.z1 = z[0];
        cfg.scalarization.z2 = z[1];
      }
      read_into(s, "epsilon", cfg.scalarization.epsilon);
      read_into(s, "sigma", cfg.scalarization.sigma);
      read_into(s, "track_ideal", cfg.scalarization.track_ideal);
    }

    if (j.contains("gains")) {
      const json& g = j.at("gains");
      check_keys(g, {"a", "c", "A", "alpha", "gamma"}, "gains");
      read_into(g, "a", cfg.gains.a);
      read_into(g, "c", cfg.gains.c);
      read_into(g, "alpha", cfg.gains.alpha);
      read_into(g, "gamma", cfg.gains.gamma);
      if (g.contains("A") && !g.at("A").is_null()) {
        cfg.gains.A = g.at("A").get<double>();
        cfg.gains_A_auto = false;
      }
    }

    if (j.contains("history")) {
      const json& h = j.at("history");
      check_keys(h, {"m", "d", "blend_gamma", "b"}, "history");
      read_into(h, "m", cfg.history.m);
      read_into(h, "d", cfg.history.decay);
      read_into(h, "blend_gamma", cfg.history.blend_gamma);
      read_into(h, "b", cfg.history.b);
    }

    cfg.iterations = j.at("iterations").get<int>();
    read_into(j, "seeds", cfg.seeds);
    if (j.contains("budget") && !j.at("budget").is_null()) {
      cfg.budget = j.at("budget").get<long long>();
    }
    read_into(j, "reuse_midpoint", cfg.reuse_midpoint);
    read_into(j, "threshold_fraction", cfg.threshold_fraction);

    if (j.contains("early_stop")) {
      const json& e = j.at("early_stop");
      check_keys(e, {"enabled", "window", "tol"}, "early_stop");
      read_into(e, "enabled", cfg.early_stop.enabled);
      read_into(e, "window", cfg.early_stop.window);
      read_into(e, "tol", cfg.early_stop.tol);
    }

    if (j.contains("es")) {
      const json& e = j.at("es");
      check_keys(e, {"population", "step_scale"}, "es");
      read_into(e, "population", cfg.es.population);
      read_into(e, "step_scale", cfg.es.step_scale);
    }

    if (j.contains("theta0") && !j.at("theta0").is_null()) {
      cfg.theta0 = j.at("theta0").get<Vec>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config type error: ") + e.what());
  }

  cfg.validate();
  return cfg;
}

std::string config_to_json_string(const ExperimentConfig& cfg) {
  json j;
  j["problem"] = {{"name", cfg.problem.name},
                  {"dim", cfg.problem.dim},
                  {"noise_scale", cfg.problem.noise_scale},
                  {"problem_seed", cfg.problem.problem_seed},
                  {"n_samples", cfg.problem.n_samples},
                  {"feature_dim", cfg.problem.feature_dim}};
  j["algorithm"] = algorithm_name(cfg.algorithm);
  j["ablation"] = {{"no_history", cfg.ablation.no_history},
                   {"no_critical_collection", cfg.ablation.no_critical_collection},
                   {"no_direction_adjust", cfg.ablation.no_direction_adjust},
                   {"no_stepsize_adjust", cfg.ablation.no_stepsize_adjust}};
  j["scalarization"] = {{"lambda", {cfg.scalarization.lambda1, cfg.scalarization.lambda2}},
                        {"ideal_point", {cfg.scalarization.z1, cfg.scalarization.z2}},
                        {"epsilon", cfg.scalarization.epsilon},
                        {"sigma", cfg.scalarization.sigma},
                        {"track_ideal", cfg.scalarization.track_ideal}};
  j["gains"] = {{"a", cfg.gains.a},
                {"c", cfg.gains.c},
                {"A", cfg.gains_A_auto ? json(nullptr) : json(cfg.gains.A)},
                {"alpha", cfg.gains.alpha},
                {"gamma", cfg.gains.gamma}};
  j["history"] = {{"m", cfg.history.m},
                  {"d", cfg.history.decay},
                  {"blend_gamma", cfg.history.blend_gamma},
                  {"b", cfg.history.b}};
  j["iterations"] = cfg.iterations;
  j["seeds"] = cfg.seeds;
  j["budget"] = cfg.budget == CallCounter::kUnlimited ? json(nullptr) : json(cfg.budget);
  j["reuse_midpoint"] = cfg.reuse_midpoint;
  j["threshold_fraction"] = cfg.threshold_fraction;
  j["early_stop"] = {{"enabled", cfg.early_stop.enabled},
                     {"window", cfg.early_stop.window},
                     {"tol", cfg.early_stop.tol}};
  j["es"] = {{"population", cfg.es.population}, {"step_scale", cfg.es.step_scale}};
  j["theta0"] = cfg.theta0 ? json(*cfg.theta0) : json(nullptr);
  return j.dump(2) + "\n";
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json_string(buf.str());
}

void save_config(const ExperimentConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open config file for writing: " + path);
  out << config_to_json_string(config);
  if (!out) throw ConfigError("write failed for config file: " + path);
}

// --- problem construction ------------------------------------------------------

TwoObjectiveProblem build_problem(const ProblemSpec& spec) {
  if (spec.name == "two-quadratic") {
    Vec c1 = zeros(spec.dim);
    Vec c2 = zeros(spec.dim);
    c1[0] = 1.0;
    c2[0] = -1.0;
    return make_two_quadratic(spec.dim, c1, c2);
  }
  if (spec.name == "concave-front") {
    return make_concave_front(spec.dim);
  }
  if (spec.name == "toy-anonymizer") {
    RngHandle rng(spec.problem_seed, 7);
    ToyAnonymizerOptions opt;
    opt.n_samples = spec.n_samples;
    opt.feature_dim = spec.feature_dim;
    return make_toy_anonymizer(rng, opt).problem;
  }
  throw ConfigError("problem '" + spec.name + "' is not a two-objective problem");
}

namespace {

GainSchedule effective_gains(const ExperimentConfig& cfg) {
  GainSchedule g = cfg.gains;
  if (cfg.gains_A_auto) g.A = static_cast<double>(cfg.iterations) / 10.0;
  return g;
}

Scalarization algorithm_kind(Algorithm a) {
  switch (a) {
    case Algorithm::ours: return Scalarization::augmented_tchebycheff;
    case Algorithm::ours_weighted_sum: return Scalarization::weighted_sum;
    case Algorithm::ours_tchebycheff_only: return Scalarization::tchebycheff;
    default: throw ConfigError("algorithm has no scalarization kind");
  }
}

HistoryMode ablated_mode(const AblationFlags& flags) {
  if (flags.no_history) return HistoryMode::none;
  if (flags.no_critical_collection) return HistoryMode::fifo;
  return HistoryMode::critical;
}

std::optional<long long> threshold_crossing(const std::vector<StepRecord>& trajectory,
                                            double fraction) {
  if (trajectory.empty()) return std::nullopt;
  double threshold = fraction * trajectory.front().l_blackbox;
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    if (trajectory[i].l_blackbox <= threshold) {
      // Calls spent to *reach* this iterate: everything before this step.
      return i == 0 ? 0 : trajectory[i - 1].cumulative_calls;
    }
  }
  return std::nullopt;
}

bool last_pair_nondominated(const std::vector<StepRecord>& trajectory) {
  if (trajectory.empty()) return false;
  ObjectivePair last{trajectory.back().l_blackbox, trajectory.back().l_whitebox};
  for (const StepRecord& r : trajectory) {
    if (dominates(ObjectivePair{r.l_blackbox, r.l_whitebox}, last)) return false;
  }
  return true;
}

SeedOutcome run_one_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  SeedOutcome outcome;
  outcome.seed = seed;
  RngHandle rng(seed, 0);  // stream 0: perturbation / offspring sampling

  try {
    if (is_single_objective(cfg.problem)) {
      ScalarBenchmark bench = noisy_sphere_benchmark(
          cfg.problem.dim, cfg.problem.noise_scale,
          RngHandle(seed, 1));  // stream 1: observation noise
      if (cfg.budget != CallCounter::kUnlimited) bench.objective.set_budget(cfg.budget);
      Vec theta0 = cfg.theta0 ? *cfg.theta0 : bench.theta0;

      if (cfg.algorithm == Algorithm::es_baseline) {
        EsOptions es = cfg.es;
        es.iterations = cfg.iterations;
        EsResult es_result = es_baseline(bench.objective, bench.true_loss, theta0, es, rng);
        outcome.result =
            RunResult{es_result.theta, std::move(es_result.trajectory), es_result.truncated, false};
      } else {
        ScalarLoopOptions opt;
        opt.gains = effective_gains(cfg);
        opt.history = cfg.history;
        opt.iterations = cfg.iterations;
        if (cfg.algorithm == Algorithm::spsa_plain) {
          opt.mode = HistoryMode::none;
        } else {
          opt.mode = ablated_mode(cfg.ablation);
          opt.adjust_direction = !cfg.ablation.no_direction_adjust;
          opt.adjust_step = !cfg.ablation.no_stepsize_adjust;
        }
        outcome.result = run_scalar_spsa(bench.objective, bench.true_loss, theta0, opt, rng);
      }
      outcome.blackbox_calls = bench.objective.calls();
      outcome.evals_to_threshold =
          threshold_crossing(outcome.result.trajectory, cfg.threshold_fraction);
    } else {
      TwoObjectiveProblem problem = build_problem(cfg.problem);
      if (cfg.budget != CallCounter::kUnlimited) problem.blackbox.set_budget(cfg.budget);
      Vec theta0 = cfg.theta0 ? *cfg.theta0 : problem.theta0;

      OptimizeOptions opt;
      opt.scalarization = cfg.scalarization;
      opt.gains = effective_gains(cfg);
      opt.history = cfg.history;
      opt.iterations = cfg.iterations;
      opt.kind = algorithm_kind(cfg.algorithm);
      opt.history_mode = ablated_mode(cfg.ablation);
      opt.adjust_direction = !cfg.ablation.no_direction_adjust;
      opt.adjust_step = !cfg.ablation.no_stepsize_adjust;
      opt.reuse_midpoint = cfg.reuse_midpoint;
      opt.early_stop = cfg.early_stop;

      outcome.result = optimize(problem, opt, theta0, rng);
      outcome.blackbox_calls = problem.blackbox.calls();
      outcome.final_nondominated_in_trajectory = last_pair_nondominated(outcome.result.trajectory);
    }
    outcome.status =
        outcome.result.truncated ? SeedStatus::budget_exhausted : SeedStatus::ok;
  } catch (const DivergenceError& e) {
    outcome.status = SeedStatus::diverged;
    outcome.message = e.what();
  }
  return outcome;
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  RunReport report;
  report.config = config;
  report.outcomes.resize(config.seeds.size());
  const std::int64_t n = static_cast<std::int64_t>(config.seeds.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      report.outcomes[static_cast<std::size_t>(i)] =
          run_one_seed(config, config.seeds[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical(mospsa_seed_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return report;
}

std::optional<long long> RunReport::median_evals_to_threshold() const {
  std::vector<long long> values;
  for (const SeedOutcome& o : outcomes) {
    if (o.status == SeedStatus::diverged) continue;
    values.push_back(o.evals_to_threshold ? *o.evals_to_threshold : LLONG_MAX);
  }
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  long long med = values[(values.size() - 1) / 2];  // lower median
  if (med == LLONG_MAX) return std::nullopt;
  return med;
}

bool RunReport::all_diverged() const {
  return !outcomes.empty() &&
         std::all_of(outcomes.begin(), outcomes.end(),
                     [](const SeedOutcome& o) { return o.status == SeedStatus::diverged; });
}

bool RunReport::all_budget_exhausted() const {
  return !outcomes.empty() && std::all_of(outcomes.begin(), outcomes.end(), [](const SeedOutcome& o) {
    return o.status == SeedStatus::budget_exhausted;
  });
}

namespace {

const char* status_name(SeedStatus s) {
  switch (s) {
    case SeedStatus::ok: return "ok";
    case SeedStatus::diverged: return "diverged";
    case SeedStatus::budget_exhausted: return "budget-exhausted";
  }
  return "?";
}

}  // namespace

void emit_report(const RunReport& report, const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + out_dir + ": " + ec.message());

  save_config(report.config, out_dir + "/config.json");

  for (const SeedOutcome& o : report.outcomes) {
    write_record_file(out_dir + "/records_seed" + std::to_string(o.seed) + ".tsv", o.result);
  }

  std::ofstream out(out_dir + "/summary.txt");
  if (!out) throw std::runtime_error("cannot open summary file in " + out_dir);
  out << "algorithm\t" << algorithm_name(report.config.algorithm) << '\n';
  out << "problem\t" << report.config.problem.name << "\tdim\t" << report.config.problem.dim
      << '\n';
  out << "iterations\t" << report.config.iterations << '\n';
  out << "seed\tstatus\tsteps\tfinal_L_blackbox\tfinal_L_whitebox\tcalls\tevals_to_threshold"
         "\tfinal_nondominated\n";
  for (const SeedOutcome& o : report.outcomes) {
    out << o.seed << '\t' << status_name(o.status) << '\t' << o.result.trajectory.size() << '\t';
    if (o.result.trajectory.empty()) {
      out << "-\t-\t";
    } else {
      out << format_double(o.result.trajectory.back().l_blackbox) << '\t'
          << format_double(o.result.trajectory.back().l_whitebox) << '\t';
    }
    out << o.blackbox_calls << '\t';
    if (o.evals_to_threshold) {
      out << *o.evals_to_threshold;
    } else {
      out << '-';
    }
    out << '\t' << (o.final_nondominated_in_trajectory ? "yes" : "no") << '\n';
  }
  auto median = report.median_evals_to_threshold();
  out << "median_evals_to_threshold\t";
  if (median) {
    out << *median;
  } else {
    out << '-';
  }
  out << '\n';
  if (!out) throw std::runtime_error("write failed for summary file in " + out_dir);
}

// --- oracle + sweep -------------------------------------------------------------

OracleFront build_oracle_front(const ProblemSpec& spec, int points_per_axis) {
  if (spec.name != "two-quadratic" && spec.name != "concave-front") {
    throw ConfigError("grid oracle supports the analytic two-objective problems only");
  }
  if (spec.dim != 2) throw ConfigError("grid oracle needs problem.dim == 2");
  Vec lo, hi;
  if (spec.name == "two-quadratic") {
    lo = {-2.0, -2.0};
    hi = {2.0, 2.0};
  } else {
    lo = {0.0, 0.0};
    hi = {1.0, 1.0};
  }
  OracleFront oracle;
  oracle.points_per_axis = points_per_axis;
  oracle.grid = make_grid(lo, hi, points_per_axis);
  TwoObjectiveProblem problem = build_problem(spec);
  oracle.pairs = evaluate_grid(problem, oracle.grid);
  oracle.mask = front_mask(oracle.pairs);
  return oracle;
}

std::vector<ObjectivePair> OracleFront::front_pairs() const {
  std::vector<ObjectivePair> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (mask[i]) out.push_back(pairs[i]);
  }
  return out;
}

Theorem1Report run_verify_theorem1(const ExperimentConfig& config,
                                   const std::vector<std::pair<double, double>>& lambdas,
                                   int points_per_axis) {
  config.validate();
  OracleFront oracle = build_oracle_front(config.problem, points_per_axis);
  return verify_theorem1(oracle.pairs, lambdas, config.scalarization,
                         algorithm_kind(config.algorithm));
}

namespace {

double pair_distance(const ObjectivePair& a, const ObjectivePair& b) {
  double dx = a.blackbox - b.blackbox;
  double dy = a.whitebox - b.whitebox;
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

SweepReport sweep_lambda(const ExperimentConfig& config,
                         const std::vector<std::pair<double, double>>& lambdas) {
  config.validate();
  if (lambdas.empty()) throw ConfigError("lambda grid must not be empty");
  for (const auto& [l1, l2] : lambdas) {
    if (!(l1 > 0.0) || !(l2 > 0.0)) {
      throw ConfigError("lambda grid entries must be strictly positive");
    }
  }

  SweepReport report;
  report.config = config;
  report.entries.resize(lambdas.size());

  const std::int64_t n = static_cast<std::int64_t>(lambdas.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      ExperimentConfig one = config;
      one.scalarization.lambda1 = lambdas[static_cast<std::size_t>(i)].first;
      one.scalarization.lambda2 = lambdas[static_cast<std::size_t>(i)].second;
      one.seeds = {config.seeds.front()};
      SeedOutcome outcome = run_one_seed(one, one.seeds.front());
      SweepEntry entry;
      entry.lambda1 = one.scalarization.lambda1;
      entry.lambda2 = one.scalarization.lambda2;
      entry.status = outcome.status;
      if (!outcome.result.trajectory.empty()) {
        entry.final_pair = ObjectivePair{outcome.result.trajectory.back().l_blackbox,
                                         outcome.result.trajectory.back().l_whitebox};
      }
      report.entries[static_cast<std::size_t>(i)] = entry;
    } catch (...) {
#pragma omp critical(mospsa_sweep_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  OracleFront oracle = build_oracle_front(config.problem);
  std::vector<ObjectivePair> front = oracle.front_pairs();
  ObjectivePair extreme1 = front.front();  // min blackbox
  ObjectivePair extreme2 = front.front();  // min whitebox
  for (const ObjectivePair& p : front) {
    if (p.blackbox < extreme1.blackbox) extreme1 = p;
    if (p.whitebox < extreme2.whitebox) extreme2 = p;
  }

  std::vector<ObjectivePair> reps;
  for (SweepEntry& entry : report.entries) {
    if (entry.status != SeedStatus::ok) continue;
    double best = std::numeric_limits<double>::infinity();
    for (const ObjectivePair& p : front) best = std::min(best, pair_distance(entry.final_pair, p));
    entry.front_distance = best;
    int assigned = -1;
    for (std::size_t c = 0; c < reps.size(); ++c) {
      if (pair_distance(entry.final_pair, reps[c]) <= report.cluster_tolerance) {
        assigned = static_cast<int>(c);
        break;
      }
    }
    if (assigned < 0) {
      reps.push_back(entry.final_pair);
      assigned = static_cast<int>(reps.size()) - 1;
    }
    entry.cluster = assigned;
  }

  report.distinct_clusters = static_cast<int>(reps.size());
  bool extremes_only = !reps.empty();
  for (const ObjectivePair& rep : reps) {
    double front_dist = std::numeric_limits<double>::infinity();
    for (const ObjectivePair& p : front) front_dist = std::min(front_dist, pair_distance(rep, p));
    bool nondominated = front_dist <= report.cluster_tolerance;
    bool at_extreme = pair_distance(rep, extreme1) <= report.cluster_tolerance ||
                      pair_distance(rep, extreme2) <= report.cluster_tolerance;
    if (nondominated) report.nondominated_clusters++;
    if (nondominated && !at_extreme) report.interior_clusters++;
    if (!at_extreme) extremes_only = false;
  }
  report.extremes_only = extremes_only;
  return report;
}

}  // namespace mospsa
