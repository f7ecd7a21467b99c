#include "mospsa/scalarize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mospsa {

void ScalarizationConfig::validate() const {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) {
    throw std::invalid_argument("ScalarizationConfig: both weights must be strictly positive");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("ScalarizationConfig: epsilon must be > 0");
  if (!(sigma > 0.0)) throw std::invalid_argument("ScalarizationConfig: sigma must be > 0");
  if (!std::isfinite(z1) || !std::isfinite(z2)) {
    throw std::invalid_argument("ScalarizationConfig: ideal point must be finite");
  }
}

ScalarizationConfig ScalarizationConfig::normalized() const {
  validate();
  ScalarizationConfig out = *this;
  double sum = lambda1 + lambda2;
  out.lambda1 = lambda1 / sum;
  out.lambda2 = lambda2 / sum;
  return out;
}

double weighted_sum(const ObjectivePair& pair, const ScalarizationConfig& config) {
  config.validate();
  return config.lambda1 * pair.blackbox + config.lambda2 * pair.whitebox;
}

TchebResult tchebycheff(const ObjectivePair& pair, const ScalarizationConfig& config) {
  config.validate();
  double term1 = config.lambda1 * (pair.blackbox - (config.z1 - config.epsilon));
  double term2 = config.lambda2 * (pair.whitebox - (config.z2 - config.epsilon));
  if (term2 > term1) return {term2, 2};
  return {term1, 1};
}

TchebResult augmented_tchebycheff(const ObjectivePair& pair, const ScalarizationConfig& config) {
  TchebResult t = tchebycheff(pair, config);
  t.value += config.sigma * weighted_sum(pair, config);
  return t;
}

double scalarize_value(Scalarization kind, const ObjectivePair& pair,
                       const ScalarizationConfig& config) {
  switch (kind) {
    case Scalarization::weighted_sum:
      return weighted_sum(pair, config);
    case Scalarization::tchebycheff:
      return tchebycheff(pair, config).value;
    case Scalarization::augmented_tchebycheff:
      return augmented_tchebycheff(pair, config).value;
  }
  throw std::logic_error("scalarize_value: unknown kind");
}

Vec combined_gradient(const Vec& g_tilde, const Vec& h, double indicator, int active_index,
                      const ScalarizationConfig& config) {
  require_same_dim(g_tilde, h, "combined_gradient");
  if (active_index != 1 && active_index != 2) {
    throw std::invalid_argument("combined_gradient: active_index must be 1 or 2");
  }
  double wu = config.lambda1 * (1.0 + indicator);
  Vec out(g_tilde.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double u = wu * g_tilde[i];
    double g = u + config.lambda2 * h[i];
    out[i] = (active_index == 1 ? u : config.lambda2 * h[i]) + config.sigma * g;
  }
  return out;
}

namespace {

Vec update_gradient(Scalarization kind, const Vec& g_tilde, const Vec& h, double indicator,
                    int active_index, const ScalarizationConfig& config) {
  switch (kind) {
    case Scalarization::weighted_sum: {
      double wu = config.lambda1 * (1.0 + indicator);
      Vec out(g_tilde.size());
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = wu * g_tilde[i] + config.lambda2 * h[i];
      }
      return out;
    }
    case Scalarization::tchebycheff: {
      ScalarizationConfig plain = config;
      plain.sigma = 0.0;  // augmentation off; bypasses validate() on purpose
      return combined_gradient(g_tilde, h, indicator, active_index, plain);
    }
    case Scalarization::augmented_tchebycheff:
      return combined_gradient(g_tilde, h, indicator, active_index, config);
  }
  throw std::logic_error("update_gradient: unknown kind");
}

}  // namespace

RunResult optimize(const TwoObjectiveProblem& problem, const OptimizeOptions& options,
                   const Vec& theta0, RngHandle& rng) {
  options.gains.validate();
  options.history.validate();
  ScalarizationConfig config = options.scalarization.normalized();
  if (options.iterations < 0) throw std::invalid_argument("optimize: negative iterations");
  if (theta0.size() != problem.dim) throw std::invalid_argument("optimize: theta0 dimension mismatch");

  RunResult result;
  result.theta = theta0;
  result.trajectory.reserve(static_cast<std::size_t>(options.iterations));
  CriticalGradientSet set(options.history.m, options.history.decay);

  double tracked_z1 = std::numeric_limits<double>::infinity();
  double tracked_z2 = std::numeric_limits<double>::infinity();
  std::vector<double> scalar_series;  // for early stopping

  for (int k = 1; k <= options.iterations; ++k) {
    GainPair gains = gain_at(options.gains, k);

    ObjectivePair pair;
    SpsaEstimate est;
    try {
      if (options.reuse_midpoint) {
        est = estimate_gradient(problem.blackbox, result.theta, k, options.gains, rng);
        pair = ObjectivePair{0.5 * (est.plus_value + est.minus_value),
                             problem.whitebox.value(result.theta)};
      } else {
        pair = evaluate_pair(problem, result.theta);
        est = estimate_gradient(problem.blackbox, result.theta, k, options.gains, rng);
      }
    } catch (const BudgetExceededError&) {
      result.truncated = true;
      break;
    }

    if (config.track_ideal) {
      tracked_z1 = std::min(tracked_z1, pair.blackbox);
      tracked_z2 = std::min(tracked_z2, pair.whitebox);
      config.z1 = tracked_z1;
      config.z2 = tracked_z2;
    }

    bool have_history = options.history_mode != HistoryMode::none && !set.empty();
    Vec blended = have_history ? set.blend(est.gradient, options.history.blend_gamma)
                               : est.gradient;
    double indicator =
        have_history ? status_indicator(est.gradient, blended, options.history.b).value : 0.0;
    const Vec& g_tilde = options.adjust_direction ? blended : est.gradient;
    double applied_indicator = options.adjust_step ? indicator : 0.0;

    Vec h = problem.whitebox.gradient(result.theta);
    int active = tchebycheff(pair, config).active_index;
    Vec grad = update_gradient(options.kind, g_tilde, h, applied_indicator, active, config);

    Vec next = axpy(-gains.a_k, grad, result.theta);
    if (!all_finite(next)) throw DivergenceError(k, "non-finite parameter");
    if (l2_norm(next) > options.divergence_norm) {
      throw DivergenceError(k, "parameter norm exceeds guard");
    }

    if (options.history_mode == HistoryMode::critical) {
      set.maybe_insert(est.gradient, k);
    } else if (options.history_mode == HistoryMode::fifo) {
      set.insert_latest(est.gradient, k);
    }

    result.trajectory.push_back(StepRecord{k, pair.blackbox, pair.whitebox, active,
                                           applied_indicator, gains.a_k,
                                           problem.blackbox.calls()});
    result.theta = std::move(next);

    if (options.early_stop.enabled) {
      scalar_series.push_back(scalarize_value(options.kind, pair, config));
      int w = options.early_stop.window;
      if (w > 0 && static_cast<int>(scalar_series.size()) >= 2 * w) {
        auto begin = scalar_series.end() - 2 * w;
        double prev = 0.0, tail = 0.0;
        for (int i = 0; i < w; ++i) {
          prev += begin[i];
          tail += begin[w + i];
        }
        if ((prev - tail) / w < options.early_stop.tol) {
          result.early_stopped = true;
          break;
        }
      }
    }
  }
  return result;
}

RunResult optimize_weighted_sum(const TwoObjectiveProblem& problem, const OptimizeOptions& options,
                                const Vec& theta0, RngHandle& rng) {
  OptimizeOptions ws = options;
  ws.kind = Scalarization::weighted_sum;
  return optimize(problem, ws, theta0, rng);
}

}  // namespace mospsa
