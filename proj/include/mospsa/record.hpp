#ifndef MOSPSA_RECORD_HPP
#define MOSPSA_RECORD_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "mospsa/vec.hpp"

namespace mospsa {

// One trajectory row. Values describe theta_k as seen at the start of step k
// (before the update), except cumulative_calls which includes step k's own
// black-box charges. step_size is the scalar multiplier actually applied to
// the update direction. Single-objective runs carry NaN in l_whitebox.
struct StepRecord {
  int step = 0;
  double l_blackbox = 0.0;
  double l_whitebox = 0.0;
  int active_index = 1;  // which objective attains the Tchebycheff max
  double indicator = 0.0;
  double step_size = 0.0;
  long long cumulative_calls = 0;
};

struct RunResult {
  Vec theta;
  std::vector<StepRecord> trajectory;
  bool truncated = false;      // black-box budget ran out mid-run
  bool early_stopped = false;  // trailing-window improvement fell below tol
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(int step_index, const std::string& detail)
      : std::runtime_error("divergence at step " + std::to_string(step_index) + ": " + detail),
        step(step_index) {}
  int step;
};

// Line-delimited record file: one tab-separated header, one row per step,
// doubles printed with %.17g so identical runs produce identical bytes.
// Truncated or early-stopped runs get a trailing '#'-prefixed marker line.
void write_record_file(const std::string& path, const RunResult& result);

RunResult read_record_file(const std::string& path);

extern const char* const kRecordHeader;

std::string format_double(double v);

}  // namespace mospsa

#endif
