#ifndef MOSPSA_SPSA_HPP
#define MOSPSA_SPSA_HPP

#include "mospsa/objective.hpp"
#include "mospsa/rng.hpp"
#include "mospsa/vec.hpp"

namespace mospsa {

// Standard SPSA gain sequences a_k = a / (A + k)^alpha, c_k = c / k^gamma.
// Defaults follow the usual Spall recommendations; A is typically set to 10%
// of the planned iteration count by the caller.
struct GainSchedule {
  double a = 0.2;
  double c = 0.05;
  double A = 0.0;
  double alpha = 0.602;
  double gamma = 0.101;

  void validate() const;
};

struct GainPair {
  double a_k;
  double c_k;
};

GainPair gain_at(const GainSchedule& schedule, int k);

struct SpsaEstimate {
  Vec gradient;      // g_hat at step k
  int step = 0;
  double plus_value = 0.0;   // f(theta + c_k * delta)
  double minus_value = 0.0;  // f(theta - c_k * delta)
};

// Per-coordinate (fplus - fminus) / (2 c_k delta_i). Pure; shared by the
// estimator and by hand-value tests.
Vec spsa_gradient(double fplus, double fminus, double c_k, const Vec& delta);

// Two-sided simultaneous perturbation estimate: exactly two black-box calls.
SpsaEstimate estimate_gradient(const BlackBoxObjective& obj, const Vec& theta, int k,
                               const GainSchedule& schedule, RngHandle& rng);

// One plain-SPSA descent step, theta - a_k * g_hat.
Vec spsa_step(const BlackBoxObjective& obj, const Vec& theta, int k,
              const GainSchedule& schedule, RngHandle& rng);

}  // namespace mospsa

#endif
