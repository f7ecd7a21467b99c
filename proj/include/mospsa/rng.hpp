#ifndef MOSPSA_RNG_HPP
#define MOSPSA_RNG_HPP

#include <cstdint>
#include <random>

#include "mospsa/vec.hpp"

namespace mospsa {

// Seedable random stream. The (seed, stream) pair fully determines the draw
// sequence, so replicate runs get disjoint streams by deriving distinct
// stream ids instead of sharing a handle.
class RngHandle {
 public:
  explicit RngHandle(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  double uniform01();    // [0, 1)
  double normal();       // standard normal, Box-Muller
  double rademacher();   // +1 or -1, probability 1/2 each

  // New handle with the same seed and a distinct, deterministic stream id.
  RngHandle derive(std::uint64_t substream) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

// Bernoulli +-1 perturbation vector, one independent sign per coordinate.
Vec sample_perturbation(RngHandle& rng, std::size_t dim);

}  // namespace mospsa

#endif
