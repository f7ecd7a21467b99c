#include "mospsa/history.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mospsa {

void HistoryParams::validate() const {
  if (m < 1) throw std::invalid_argument("HistoryParams: m must be >= 1");
  if (!(decay > 0.0 && decay <= 1.0)) {
    throw std::invalid_argument("HistoryParams: decay must lie in (0, 1]");
  }
  if (!(blend_gamma > 0.0 && blend_gamma < 1.0)) {
    throw std::invalid_argument("HistoryParams: blend_gamma must lie in (0, 1)");
  }
  if (!(b > 0.0 && b < 2.0)) {
    throw std::invalid_argument("HistoryParams: b must lie in (0, 2)");
  }
}

double score(const GradientRecord& record, int current_step, double decay) {
  if (current_step < record.step) {
    throw std::invalid_argument("score: current step precedes the record's step");
  }
  return std::pow(decay, static_cast<double>(current_step - record.step)) * record.base_norm;
}

CriticalGradientSet::CriticalGradientSet(int capacity, double decay)
    : capacity_(capacity), decay_(decay) {
  if (capacity < 1) throw std::invalid_argument("CriticalGradientSet: capacity must be >= 1");
  if (!(decay > 0.0 && decay <= 1.0)) {
    throw std::invalid_argument("CriticalGradientSet: decay must lie in (0, 1]");
  }
}

void CriticalGradientSet::check_step(int step) const {
  for (const GradientRecord& r : records_) {
    if (step <= r.step) {
      throw std::invalid_argument("CriticalGradientSet: step index must exceed all stored steps");
    }
  }
}

bool CriticalGradientSet::maybe_insert(const Vec& gradient, int step) {
  check_step(step);
  GradientRecord candidate{gradient, step, l2_norm(gradient)};
  if (records_.size() < static_cast<std::size_t>(capacity_)) {
    records_.push_back(std::move(candidate));
    return true;
  }
  std::size_t min_idx = 0;
  double min_score = score(records_[0], step, decay_);
  for (std::size_t i = 1; i < records_.size(); ++i) {
    double s = score(records_[i], step, decay_);
    if (s < min_score) {
      min_score = s;
      min_idx = i;
    }
  }
  if (candidate.base_norm > min_score) {
    records_[min_idx] = std::move(candidate);
    return true;
  }
  return false;
}

bool CriticalGradientSet::insert_latest(const Vec& gradient, int step) {
  check_step(step);
  if (records_.size() == static_cast<std::size_t>(capacity_)) {
    auto oldest = std::min_element(records_.begin(), records_.end(),
                                   [](const auto& a, const auto& b) { return a.step < b.step; });
    records_.erase(oldest);
  }
  records_.push_back(GradientRecord{gradient, step, l2_norm(gradient)});
  return true;
}

Vec CriticalGradientSet::blend(const Vec& current, double blend_gamma) const {
  if (!(blend_gamma > 0.0 && blend_gamma < 1.0)) {
    throw std::invalid_argument("blend: blend_gamma must lie in (0, 1)");
  }
  if (records_.empty()) return current;
  Vec mean = zeros(current.size());
  for (const GradientRecord& r : records_) {
    require_same_dim(r.gradient, current, "blend");
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += r.gradient[i];
  }
  double inv = 1.0 / static_cast<double>(records_.size());
  Vec out(current.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = blend_gamma * current[i] + (1.0 - blend_gamma) * mean[i] * inv;
  }
  return out;
}

StatusIndicator status_indicator(const Vec& g_hat, const Vec& g_tilde, double b) {
  if (!(b > 0.0 && b < 2.0)) throw std::invalid_argument("status_indicator: b must lie in (0, 2)");
  std::optional<double> cos_phi = cosine(g_hat, g_tilde);
  if (!cos_phi) return StatusIndicator{0.0, b};
  return StatusIndicator{b / M_PI * std::atan(2.0 * M_PI * *cos_phi), b};
}

double adjusted_step(double a_k, const StatusIndicator& indicator) {
  if (!(a_k > 0.0)) throw std::invalid_argument("adjusted_step: a_k must be > 0");
  return (1.0 + indicator.value) * a_k;
}

RunResult run_scalar_spsa(const BlackBoxObjective& obj,
                          const std::function<double(const Vec&)>& monitor,
                          const Vec& theta0, const ScalarLoopOptions& options,
                          RngHandle& rng) {
  options.gains.validate();
  options.history.validate();
  if (options.iterations < 0) throw std::invalid_argument("run_scalar_spsa: negative iterations");

  RunResult result;
  result.theta = theta0;
  result.trajectory.reserve(static_cast<std::size_t>(options.iterations));
  CriticalGradientSet set(options.history.m, options.history.decay);

  for (int k = 1; k <= options.iterations; ++k) {
    GainPair gains = gain_at(options.gains, k);
    SpsaEstimate est;
    try {
      est = estimate_gradient(obj, result.theta, k, options.gains, rng);
    } catch (const BudgetExceededError&) {
      result.truncated = true;
      break;
    }

    bool have_history = options.mode != HistoryMode::none && !set.empty();
    Vec blended = have_history ? set.blend(est.gradient, options.history.blend_gamma)
                               : est.gradient;
    double indicator =
        have_history ? status_indicator(est.gradient, blended, options.history.b).value : 0.0;

    const Vec& direction = options.adjust_direction ? blended : est.gradient;
    double applied_indicator = options.adjust_step ? indicator : 0.0;
    double step_size = (1.0 + applied_indicator) * gains.a_k;

    double loss_at_theta = monitor ? monitor(result.theta)
                                   : 0.5 * (est.plus_value + est.minus_value);

    Vec next = axpy(-step_size, direction, result.theta);
    if (!all_finite(next)) throw DivergenceError(k, "non-finite parameter");
    if (l2_norm(next) > options.divergence_norm) {
      throw DivergenceError(k, "parameter norm exceeds guard");
    }

    if (options.mode == HistoryMode::critical) {
      set.maybe_insert(est.gradient, k);
    } else if (options.mode == HistoryMode::fifo) {
      set.insert_latest(est.gradient, k);
    }

    result.trajectory.push_back(StepRecord{k, loss_at_theta,
                                           std::numeric_limits<double>::quiet_NaN(), 1,
                                           applied_indicator, step_size, obj.calls()});
    result.theta = std::move(next);
  }
  return result;
}

}  // namespace mospsa
