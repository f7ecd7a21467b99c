#include "mospsa/objective.hpp"

#include <mutex>

namespace mospsa {

BlackBoxObjective make_noisy(const BlackBoxObjective& inner, double noise_scale, RngHandle rng) {
  if (noise_scale < 0.0) throw std::invalid_argument("make_noisy: noise_scale must be >= 0");
  struct NoiseState {
    explicit NoiseState(RngHandle r) : rng(r) {}
    RngHandle rng;
    std::mutex mu;  // guards rng under concurrent evaluation
  };
  auto state = std::make_shared<NoiseState>(rng);
  auto inner_fn = inner.fn_;
  BlackBoxObjective wrapped(inner.dim(), [inner_fn, noise_scale, state](const Vec& theta) {
    double base = inner_fn(theta);
    if (noise_scale == 0.0) return base;
    std::lock_guard<std::mutex> lock(state->mu);
    return base + noise_scale * state->rng.normal();
  });
  wrapped.counter_ = inner.counter_;
  return wrapped;
}

}  // namespace mospsa
