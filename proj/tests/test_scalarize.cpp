#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mospsa/pareto.hpp"
#include "mospsa/problems.hpp"
#include "mospsa/scalarize.hpp"

using namespace mospsa;

namespace {

ScalarizationConfig base_config() {
  ScalarizationConfig cfg;
  cfg.lambda1 = 0.5;
  cfg.lambda2 = 0.5;
  cfg.z1 = 0.0;
  cfg.z2 = 0.0;
  cfg.epsilon = 0.1;
  cfg.sigma = 0.01;
  return cfg;
}

}  // namespace

TEST_CASE("weighted sum hand values and weight validation") {
  ScalarizationConfig cfg = base_config();
  CHECK(weighted_sum(ObjectivePair{2.0, 4.0}, cfg) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(weighted_sum(ObjectivePair{0.0, 0.0}, cfg) == 0.0);
  cfg.lambda2 = 0.0;  // hard zero weight is disallowed
  CHECK_THROWS_AS(weighted_sum(ObjectivePair{1.0, 1.0}, cfg), std::invalid_argument);
}

TEST_CASE("tchebycheff hand values, active index and tie rule") {
  ScalarizationConfig cfg = base_config();
  TchebResult r = tchebycheff(ObjectivePair{2.0, 4.0}, cfg);
  CHECK(r.value == doctest::Approx(2.05).epsilon(1e-12));
  CHECK(r.active_index == 2);

  // at the shifted ideal point both terms are zero; ties go to index 1
  TchebResult tie = tchebycheff(ObjectivePair{cfg.z1 - cfg.epsilon, cfg.z2 - cfg.epsilon}, cfg);
  CHECK(tie.value == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(tie.active_index == 1);

  cfg.lambda1 = 0.9;
  cfg.lambda2 = 0.1;
  TchebResult skew = tchebycheff(ObjectivePair{2.0, 4.0}, cfg);
  CHECK(skew.value == doctest::Approx(1.89).epsilon(1e-12));
  CHECK(skew.active_index == 1);
}

TEST_CASE("augmented tchebycheff hand values and structure") {
  ScalarizationConfig cfg = base_config();
  TchebResult r = augmented_tchebycheff(ObjectivePair{2.0, 4.0}, cfg);
  CHECK(r.value == doctest::Approx(2.08).epsilon(1e-12));
  CHECK(r.active_index == 2);

  // at (0,0) the max term is epsilon * max(lambda) and the augmentation is 0
  TchebResult at_zero = augmented_tchebycheff(ObjectivePair{0.0, 0.0}, cfg);
  CHECK(at_zero.value == doctest::Approx(cfg.epsilon * 0.5).epsilon(1e-12));
}

TEST_CASE("augmentation identity holds exactly for random pairs") {
  RngHandle rng(41, 0);
  for (int trial = 0; trial < 500; ++trial) {
    ScalarizationConfig cfg;
    cfg.lambda1 = 0.05 + rng.uniform01();
    cfg.lambda2 = 0.05 + rng.uniform01();
    cfg.z1 = rng.normal();
    cfg.z2 = rng.normal();
    cfg.epsilon = 0.001 + rng.uniform01();
    cfg.sigma = 0.0001 + 0.01 * rng.uniform01();
    ObjectivePair pair{5.0 * rng.normal(), 5.0 * rng.normal()};
    double aug = augmented_tchebycheff(pair, cfg).value;
    double tch = tchebycheff(pair, cfg).value;
    CHECK(aug - tch == cfg.sigma * weighted_sum(pair, cfg));
    // max dominates both terms
    CHECK(tch >= cfg.lambda1 * (pair.blackbox - cfg.z1 + cfg.epsilon) - 1e-15);
    CHECK(tch >= cfg.lambda2 * (pair.whitebox - cfg.z2 + cfg.epsilon) - 1e-15);
  }
}

TEST_CASE("combined gradient hand values") {
  ScalarizationConfig cfg = base_config();
  cfg.epsilon = 0.01;
  Vec g_tilde{1.0, 0.0};
  Vec h{0.0, 1.0};
  Vec active1 = combined_gradient(g_tilde, h, 0.0, 1, cfg);
  CHECK(active1[0] == doctest::Approx(0.505).epsilon(1e-12));
  CHECK(active1[1] == doctest::Approx(0.005).epsilon(1e-12));
  Vec active2 = combined_gradient(g_tilde, h, 0.0, 2, cfg);
  CHECK(active2[0] == doctest::Approx(0.005).epsilon(1e-12));
  CHECK(active2[1] == doctest::Approx(0.505).epsilon(1e-12));

  // sigma -> 0 leaves only the active branch (internal structural check)
  ScalarizationConfig degenerate = cfg;
  degenerate.sigma = 0.0;
  Vec pure = combined_gradient(g_tilde, h, 0.25, 1, degenerate);
  CHECK(pure[0] == doctest::Approx(cfg.lambda1 * 1.25).epsilon(1e-12));
  CHECK(pure[1] == 0.0);

  CHECK_THROWS_AS(combined_gradient(g_tilde, h, 0.0, 3, cfg), std::invalid_argument);
  CHECK_THROWS_AS(combined_gradient(g_tilde, zeros(3), 0.0, 1, cfg), std::invalid_argument);
}

TEST_CASE("combined gradient is linear in each argument") {
  RngHandle rng(42, 0);
  ScalarizationConfig cfg = base_config();
  for (int trial = 0; trial < 100; ++trial) {
    Vec g(3), h(3);
    for (double& v : g) v = rng.normal();
    for (double& v : h) v = rng.normal();
    double s = 2.0 * rng.normal();
    int active = rng.uniform01() < 0.5 ? 1 : 2;
    double ind = 0.8 * rng.uniform01() - 0.4;

    Vec scaled_g = combined_gradient(scale(s, g), h, ind, active, cfg);
    Vec base_g = combined_gradient(g, h, ind, active, cfg);
    Vec at_zero_g = combined_gradient(zeros(3), h, ind, active, cfg);
    Vec scaled_h = combined_gradient(g, scale(s, h), ind, active, cfg);
    Vec at_zero_h = combined_gradient(g, zeros(3), ind, active, cfg);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(scaled_g[i] ==
            doctest::Approx(s * (base_g[i] - at_zero_g[i]) + at_zero_g[i]).epsilon(1e-10));
      CHECK(scaled_h[i] ==
            doctest::Approx(s * (base_g[i] - at_zero_h[i]) + at_zero_h[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("optimize: no-op run and determinism") {
  TwoObjectiveProblem problem = make_two_quadratic(2, Vec{1.0, 0.0}, Vec{-1.0, 0.0});
  OptimizeOptions opt;
  opt.iterations = 0;
  RngHandle rng(43, 0);
  RunResult r = optimize(problem, opt, Vec{3.0, 3.0}, rng);
  CHECK(r.theta == Vec{3.0, 3.0});
  CHECK(r.trajectory.empty());

  opt.iterations = 100;
  TwoObjectiveProblem pa = make_two_quadratic(2, Vec{1.0, 0.0}, Vec{-1.0, 0.0});
  TwoObjectiveProblem pb = make_two_quadratic(2, Vec{1.0, 0.0}, Vec{-1.0, 0.0});
  RngHandle ra(43, 1);
  RngHandle rb(43, 1);
  RunResult a = optimize(pa, opt, Vec{3.0, 3.0}, ra);
  RunResult b = optimize(pb, opt, Vec{3.0, 3.0}, rb);
  CHECK(a.theta == b.theta);
  REQUIRE(a.trajectory.size() == 100);
  for (std::size_t i = 0; i < 100; ++i) {
    CHECK(a.trajectory[i].l_blackbox == b.trajectory[i].l_blackbox);
    CHECK(a.trajectory[i].indicator == b.trajectory[i].indicator);
  }
}

TEST_CASE("optimize call accounting: 3 per step, 2 with reuse_midpoint") {
  OptimizeOptions opt;
  opt.iterations = 25;
  {
    TwoObjectiveProblem problem = make_two_quadratic(2, Vec{1.0, 0.0}, Vec{-1.0, 0.0});
    RngHandle rng(44, 0);
    RunResult r = optimize(problem, opt, Vec{2.0, 2.0}, rng);
    CHECK(problem.blackbox.calls() == 3 * 25);
    for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
      CHECK(r.trajectory[i].cumulative_calls == 3 * static_cast<long long>(i + 1));
    }
  }
  {
    OptimizeOptions reuse = opt;
    reuse.reuse_midpoint = true;
    TwoObjectiveProblem problem = make_two_quadratic(2, Vec{1.0, 0.0}, Vec{-1.0, 0.0});
    RngHandle rng(44, 0);
    RunResult r = optimize(problem, reuse, Vec{2.0, 2.0}, rng);
    CHECK(problem.blackbox.calls() == 2 * 25);
    CHECK(!r.trajectory.empty());
  }
}

TEST_CASE("optimize reaches the front of the two-quadratic problem") {
  TwoObjectiveProblem problem = make_two_quadratic(2, Vec{1.0, 0.0}, Vec{-1.0, 0.0});
  OptimizeOptions opt;
  opt.iterations = 2000;
  opt.gains.A = 200.0;
  RngHandle rng(45, 0);
  RunResult r = optimize(problem, opt, Vec{3.0, 3.0}, rng);
  ObjectivePair final_pair = {problem.blackbox.value(r.theta), problem.whitebox.value(r.theta)};

  // resolution-0.01 grid; nothing on it may beat the final pair by more than
  // the tolerance in both objectives at once
  TwoObjectiveProblem oracle = make_two_quadratic(2, Vec{1.0, 0.0}, Vec{-1.0, 0.0});
  std::vector<Vec> grid = make_grid(Vec{-2.0, -2.0}, Vec{2.0, 2.0}, 401);
  std::vector<ObjectivePair> pairs = evaluate_grid(oracle, grid);
  const double tol = 0.05;
  for (const ObjectivePair& p : pairs) {
    bool better_by_tol = p.blackbox < final_pair.blackbox - tol &&
                         p.whitebox < final_pair.whitebox - tol;
    CHECK(!better_by_tol);
  }
}

TEST_CASE("weighted-sum variant differs only when the gradients differ") {
  OptimizeOptions opt;
  opt.iterations = 40;
  TwoObjectiveProblem pa = make_two_quadratic(2, Vec{1.0, 0.0}, Vec{-1.0, 0.0});
  TwoObjectiveProblem pb = make_two_quadratic(2, Vec{1.0, 0.0}, Vec{-1.0, 0.0});
  RngHandle ra(46, 0);
  RngHandle rb(46, 0);
  RunResult at = optimize(pa, opt, Vec{3.0, 3.0}, ra);
  RunResult ws = optimize_weighted_sum(pb, opt, Vec{3.0, 3.0}, rb);
  REQUIRE(at.trajectory.size() == ws.trajectory.size());
  // same seed: identical first evaluation, trajectories split afterwards
  CHECK(at.trajectory[0].l_blackbox == ws.trajectory[0].l_blackbox);
  CHECK(at.theta != ws.theta);
}

TEST_CASE("divergence guard raises with the failing step") {
  TwoObjectiveProblem problem = make_two_quadratic(1, Vec{1.0}, Vec{-1.0});
  OptimizeOptions opt;
  opt.iterations = 500;
  opt.gains.a = 200.0;  // wildly too large on purpose
  opt.gains.A = 0.0;
  RngHandle rng(47, 0);
  CHECK_THROWS_AS(optimize(problem, opt, Vec{3.0}, rng), DivergenceError);
}

TEST_CASE("budget exhaustion truncates with partial trajectory") {
  TwoObjectiveProblem problem = make_two_quadratic(2, Vec{1.0, 0.0}, Vec{-1.0, 0.0});
  problem.blackbox.set_budget(31);
  OptimizeOptions opt;
  opt.iterations = 100;
  RngHandle rng(48, 0);
  RunResult r = optimize(problem, opt, Vec{2.0, 2.0}, rng);
  CHECK(r.truncated);
  CHECK(r.trajectory.size() == 10);  // 31 calls complete 10 full steps of 3
  CHECK(problem.blackbox.calls() <= 31);
}

TEST_CASE("argmin and active index are invariant under joint positive scaling") {
  TwoObjectiveProblem problem = make_two_quadratic(2, Vec{1.0, 0.0}, Vec{-1.0, 0.0});
  std::vector<Vec> grid = make_grid(Vec{-2.0, -2.0}, Vec{2.0, 2.0}, 41);
  std::vector<ObjectivePair> pairs = evaluate_grid(problem, grid);
  RngHandle rng(49, 0);
  for (int trial = 0; trial < 20; ++trial) {
    ScalarizationConfig cfg;
    cfg.lambda1 = 0.05 + 0.9 * rng.uniform01();
    cfg.lambda2 = 1.0 - cfg.lambda1;
    double c = 0.1 + 10.0 * rng.uniform01();
    ScalarizationConfig scaled = cfg;
    scaled.z1 *= c;
    scaled.z2 *= c;
    scaled.epsilon *= c;  // scales with the objectives to keep the argmax aligned
    std::vector<ObjectivePair> scaled_pairs;
    for (const ObjectivePair& p : pairs) {
      scaled_pairs.push_back(ObjectivePair{c * p.blackbox, c * p.whitebox});
    }
    std::size_t base_idx =
        grid_argmin(pairs, Scalarization::augmented_tchebycheff, cfg);
    std::size_t scaled_idx =
        grid_argmin(scaled_pairs, Scalarization::augmented_tchebycheff, scaled);
    CHECK(base_idx == scaled_idx);
    CHECK(tchebycheff(pairs[base_idx], cfg).active_index ==
          tchebycheff(scaled_pairs[base_idx], scaled).active_index);
  }
}

TEST_CASE("early stop fires once the trajectory stabilizes") {
  TwoObjectiveProblem problem = make_two_quadratic(2, Vec{1.0, 0.0}, Vec{-1.0, 0.0});
  OptimizeOptions opt;
  opt.iterations = 5000;
  opt.gains.A = 50.0;
  opt.early_stop.enabled = true;
  opt.early_stop.window = 50;
  opt.early_stop.tol = 1e-5;
  RngHandle rng(50, 0);
  RunResult r = optimize(problem, opt, Vec{3.0, 3.0}, rng);
  CHECK(r.early_stopped);
  CHECK(r.trajectory.size() < 5000);
}
