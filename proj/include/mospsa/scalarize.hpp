#ifndef MOSPSA_SCALARIZE_HPP
#define MOSPSA_SCALARIZE_HPP

#include "mospsa/history.hpp"
#include "mospsa/objective.hpp"
#include "mospsa/record.hpp"
#include "mospsa/spsa.hpp"
#include "mospsa/vec.hpp"

namespace mospsa {

// Weights, ideal point and the two small scalars governing the Tchebycheff
// family. Both weights must be strictly positive; the optimizer normalizes
// them to sum to one, the grid oracle accepts them unnormalized.
struct ScalarizationConfig {
  double lambda1 = 0.5;
  double lambda2 = 0.5;
  double z1 = 0.0;  // ideal value of the black-box loss
  double z2 = 0.0;  // ideal value of the white-box loss
  double epsilon = 0.01;
  double sigma = 0.001;
  bool track_ideal = false;  // maintain z as the running minimum of observed losses

  void validate() const;
  ScalarizationConfig normalized() const;
};

enum class Scalarization {
  weighted_sum,
  tchebycheff,
  augmented_tchebycheff,
};

struct TchebResult {
  double value = 0.0;
  int active_index = 1;  // ties resolve to the black-box objective
};

double weighted_sum(const ObjectivePair& pair, const ScalarizationConfig& config);
TchebResult tchebycheff(const ObjectivePair& pair, const ScalarizationConfig& config);
TchebResult augmented_tchebycheff(const ObjectivePair& pair, const ScalarizationConfig& config);

double scalarize_value(Scalarization kind, const ObjectivePair& pair,
                       const ScalarizationConfig& config);

// Piecewise gradient of the augmented Tchebycheff objective:
//   u = lambda1 (1 + I_k) g_tilde,  g = u + lambda2 h
//   active 1 -> u + sigma g,  active 2 -> lambda2 h + sigma g
Vec combined_gradient(const Vec& g_tilde, const Vec& h, double indicator, int active_index,
                      const ScalarizationConfig& config);

struct EarlyStopConfig {
  bool enabled = false;
  int window = 50;
  double tol = 1e-4;
};

struct OptimizeOptions {
  ScalarizationConfig scalarization;
  GainSchedule gains;
  HistoryParams history;
  int iterations = 1000;
  Scalarization kind = Scalarization::augmented_tchebycheff;
  HistoryMode history_mode = HistoryMode::critical;
  bool adjust_direction = true;
  bool adjust_step = true;
  // Reuse (f+ + f-)/2 from the step's own SPSA pair as the black-box reading
  // at theta_k instead of spending a third call on it.
  bool reuse_midpoint = false;
  double divergence_norm = 1e6;
  EarlyStopConfig early_stop;
};

// The full loop: SPSA estimate of the black-box gradient, critical-history
// blending and status indicator, exact white-box gradient, scalarized
// combination, descent step. Budget exhaustion returns a truncated partial
// trajectory; a non-finite or runaway iterate raises DivergenceError.
RunResult optimize(const TwoObjectiveProblem& problem, const OptimizeOptions& options,
                   const Vec& theta0, RngHandle& rng);

// Same loop with the weighted-sum gradient lambda1 (1 + I_k) g_tilde + lambda2 h.
RunResult optimize_weighted_sum(const TwoObjectiveProblem& problem, const OptimizeOptions& options,
                                const Vec& theta0, RngHandle& rng);

}  // namespace mospsa

#endif
