#include "mospsa/spsa.hpp"

#include <cmath>
#include <stdexcept>

namespace mospsa {

void GainSchedule::validate() const {
  if (!(a > 0.0) || !(c > 0.0)) throw std::invalid_argument("GainSchedule: a and c must be > 0");
  if (!(A >= 0.0)) throw std::invalid_argument("GainSchedule: A must be >= 0");
  if (!(alpha > 0.5) || !(alpha <= 1.0)) {
    throw std::invalid_argument("GainSchedule: alpha must lie in (0.5, 1]");
  }
  if (!(gamma > 0.0 && gamma <= 0.5)) {
    throw std::invalid_argument("GainSchedule: gamma must lie in (0, 0.5]");
  }
}

GainPair gain_at(const GainSchedule& schedule, int k) {
  if (k < 1) throw std::invalid_argument("gain_at: step index must be >= 1");
  double a_k = schedule.a / std::pow(schedule.A + static_cast<double>(k), schedule.alpha);
  double c_k = schedule.c / std::pow(static_cast<double>(k), schedule.gamma);
  return {a_k, c_k};
}

Vec spsa_gradient(double fplus, double fminus, double c_k, const Vec& delta) {
  double diff = (fplus - fminus) / (2.0 * c_k);
  Vec g(delta.size());
  // delta_i in {+1, -1}, so 1/delta_i == delta_i.
  for (std::size_t i = 0; i < delta.size(); ++i) g[i] = diff * delta[i];
  return g;
}

SpsaEstimate estimate_gradient(const BlackBoxObjective& obj, const Vec& theta, int k,
                               const GainSchedule& schedule, RngHandle& rng) {
  if (!all_finite(theta)) throw std::invalid_argument("estimate_gradient: non-finite theta");
  double c_k = gain_at(schedule, k).c_k;
  Vec delta = sample_perturbation(rng, theta.size());
  Vec plus = axpy(c_k, delta, theta);
  Vec minus = axpy(-c_k, delta, theta);
  double fplus = obj.value(plus);
  double fminus = obj.value(minus);
  return SpsaEstimate{spsa_gradient(fplus, fminus, c_k, delta), k, fplus, fminus};
}

Vec spsa_step(const BlackBoxObjective& obj, const Vec& theta, int k,
              const GainSchedule& schedule, RngHandle& rng) {
  SpsaEstimate est = estimate_gradient(obj, theta, k, schedule, rng);
  double a_k = gain_at(schedule, k).a_k;
  return axpy(-a_k, est.gradient, theta);
}

}  // namespace mospsa
