#ifndef MOSPSA_HISTORY_HPP
#define MOSPSA_HISTORY_HPP

#include <functional>
#include <vector>

#include "mospsa/objective.hpp"
#include "mospsa/record.hpp"
#include "mospsa/rng.hpp"
#include "mospsa/spsa.hpp"
#include "mospsa/vec.hpp"

namespace mospsa {

struct HistoryParams {
  int m = 5;                 // capacity of the critical set
  double decay = 0.9;        // d in (0, 1]
  double blend_gamma = 0.6;  // weight of the current estimate in the blend
  double b = 1.0;            // status-indicator magnitude factor, in (0, 2)

  void validate() const;
};

struct GradientRecord {
  Vec gradient;
  int step = 0;
  double base_norm = 0.0;  // ||gradient||_2 cached at insertion
};

// Decayed importance score d^(k - t_i) * ||g_t_i||_2 at the current step k.
double score(const GradientRecord& record, int current_step, double decay);

// Bounded store of past gradient estimates ranked by decayed L2-norm
// importance. Scores are recomputed on demand from the cached insertion-time
// norm rather than mutated in place.
class CriticalGradientSet {
 public:
  CriticalGradientSet(int capacity, double decay);

  // Decayed-score eviction: below capacity always inserts; at capacity the
  // candidate replaces the minimum-score record only if its own norm beats
  // that minimum. Returns whether the candidate was inserted.
  bool maybe_insert(const Vec& gradient, int step);

  // Sliding-window variant (no selection): always insert, evict the oldest.
  // Used by the no-critical-collection ablation.
  bool insert_latest(const Vec& gradient, int step);

  // gamma * current + (1 - gamma) * mean of stored gradients. An empty set
  // returns the current estimate verbatim. The mean divides by the current
  // cardinality, not the capacity, so a warming-up set is a true mean.
  Vec blend(const Vec& current, double blend_gamma) const;

  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  int capacity() const { return capacity_; }
  double decay() const { return decay_; }
  const std::vector<GradientRecord>& records() const { return records_; }

 private:
  void check_step(int step) const;

  std::vector<GradientRecord> records_;
  int capacity_;
  double decay_;
};

struct StatusIndicator {
  double value = 0.0;  // I_k, strictly inside (-b/2, b/2)
  double b = 1.0;
};

// I_k = (b/pi) * arctan(2*pi*cos(phi)) where phi is the angle between the
// raw and enhanced estimates. Zero-norm inputs have no direction to compare,
// so they map to the neutral I_k = 0.
StatusIndicator status_indicator(const Vec& g_hat, const Vec& g_tilde, double b);

// a'_k = (1 + I_k) * a_k; positive for every b in (0, 2).
double adjusted_step(double a_k, const StatusIndicator& indicator);

// --- single-objective driver -------------------------------------------------

enum class HistoryMode {
  none,      // plain SPSA: raw estimate, neutral indicator
  fifo,      // latest-m window, no selection
  critical,  // decayed-importance selection
};

struct ScalarLoopOptions {
  GainSchedule gains;
  HistoryParams history;
  int iterations = 1000;
  HistoryMode mode = HistoryMode::critical;
  bool adjust_direction = true;  // update along the blended estimate
  bool adjust_step = true;       // apply the (1 + I_k) step factor
  double divergence_norm = 1e6;
};

// Critical-history enhanced SPSA on a single black-box loss:
// theta <- theta - (1 + I_k) a_k * g_tilde_k. `monitor` is an uncounted
// ground-truth loss used only for trajectory records (pass the noiseless
// inner objective on noisy benchmarks); when absent, records carry the
// midpoint (f+ + f-)/2 of the step's own perturbation pair.
RunResult run_scalar_spsa(const BlackBoxObjective& obj,
                          const std::function<double(const Vec&)>& monitor,
                          const Vec& theta0, const ScalarLoopOptions& options,
                          RngHandle& rng);

}  // namespace mospsa

#endif
