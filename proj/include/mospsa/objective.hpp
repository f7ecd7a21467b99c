#ifndef MOSPSA_OBJECTIVE_HPP
#define MOSPSA_OBJECTIVE_HPP

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

#include "mospsa/rng.hpp"
#include "mospsa/vec.hpp"

namespace mospsa {

// Joint objective value at a point. Both entries are losses to minimize:
// smaller blackbox = better task utility, smaller whitebox = less leakage.
struct ObjectivePair {
  double blackbox = 0.0;
  double whitebox = 0.0;
};

class BudgetExceededError : public std::runtime_error {
 public:
  BudgetExceededError(long long used, long long limit)
      : std::runtime_error("black-box budget exhausted: " + std::to_string(used) +
                           " of " + std::to_string(limit) + " calls used"),
        calls_used(used) {}
  long long calls_used;
};

class NonFiniteValueError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shared evaluation counter with an optional hard budget. Increments are
// linearizable: the final count equals the total number of successful calls
// even under concurrent evaluation, and never exceeds the limit.
class CallCounter {
 public:
  static constexpr long long kUnlimited = -1;

  void charge(long long n) {
    long long cur = used_.load(std::memory_order_relaxed);
    for (;;) {
      if (limit_ != kUnlimited && cur + n > limit_) {
        throw BudgetExceededError(cur, limit_);
      }
      if (used_.compare_exchange_weak(cur, cur + n, std::memory_order_relaxed)) return;
    }
  }

  long long used() const { return used_.load(std::memory_order_relaxed); }
  long long limit() const { return limit_; }
  void set_limit(long long max_calls) { limit_ = max_calls; }

 private:
  std::atomic<long long> used_{0};
  long long limit_ = kUnlimited;
};

// Value-only objective. There is deliberately no gradient channel on this
// type; estimation has to go through queries, and every query is counted.
class BlackBoxObjective {
 public:
  BlackBoxObjective(std::size_t dim, std::function<double(const Vec&)> fn)
      : dim_(dim), fn_(std::move(fn)), counter_(std::make_shared<CallCounter>()) {}

  double value(const Vec& theta) const {
    if (theta.size() != dim_) {
      throw std::invalid_argument("BlackBoxObjective: theta dimension mismatch");
    }
    counter_->charge(1);
    double v = fn_(theta);
    if (!std::isfinite(v)) {
      throw NonFiniteValueError("black-box objective returned a non-finite value");
    }
    return v;
  }

  std::size_t dim() const { return dim_; }
  long long calls() const { return counter_->used(); }
  void set_budget(long long max_calls) { counter_->set_limit(max_calls); }
  std::shared_ptr<CallCounter> counter() const { return counter_; }

 private:
  std::size_t dim_;
  std::function<double(const Vec&)> fn_;
  std::shared_ptr<CallCounter> counter_;

  friend BlackBoxObjective make_noisy(const BlackBoxObjective&, double, RngHandle);
};

// Gradient-available objective. Evaluations are free of black-box accounting.
class WhiteBoxObjective {
 public:
  WhiteBoxObjective(std::size_t dim, std::function<double(const Vec&)> fn,
                    std::function<Vec(const Vec&)> grad)
      : dim_(dim), fn_(std::move(fn)), grad_(std::move(grad)) {}

  double value(const Vec& theta) const { return fn_(theta); }

  Vec gradient(const Vec& theta) const {
    Vec g = grad_(theta);
    if (g.size() != dim_) {
      throw std::logic_error("WhiteBoxObjective: gradient dimension mismatch");
    }
    return g;
  }

  std::size_t dim() const { return dim_; }

 private:
  std::size_t dim_;
  std::function<double(const Vec&)> fn_;
  std::function<Vec(const Vec&)> grad_;
};

// The two-objective problem: one value-only utility loss, one
// gradient-available privacy loss, plus a default starting point.
struct TwoObjectiveProblem {
  std::size_t dim;
  BlackBoxObjective blackbox;
  WhiteBoxObjective whitebox;
  Vec theta0;
};

inline ObjectivePair evaluate_pair(const TwoObjectiveProblem& problem, const Vec& theta) {
  return ObjectivePair{problem.blackbox.value(theta), problem.whitebox.value(theta)};
}

// Wraps an objective with additive zero-mean Gaussian noise of the given
// scale. The wrapper shares the inner counter, so each call still counts
// exactly once.
BlackBoxObjective make_noisy(const BlackBoxObjective& inner, double noise_scale, RngHandle rng);

}  // namespace mospsa

#endif
