#include "mospsa/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace mospsa {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream ^ 0xA5A5A5A5A5A5A5A5ULL));
}

}  // namespace

RngHandle::RngHandle(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(mix_seed(seed, stream)) {}

std::uint64_t RngHandle::next_u64() { return engine_(); }

double RngHandle::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngHandle::normal() {
  // Box-Muller, cosine branch only. Two u64 per draw keeps the stream layout
  // independent of any cached state.
  double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double RngHandle::rademacher() {
  return (next_u64() >> 63) ? 1.0 : -1.0;
}

RngHandle RngHandle::derive(std::uint64_t substream) const {
  return RngHandle(seed_, splitmix64(stream_ * 0x9E3779B97F4A7C15ULL + substream + 1));
}

Vec sample_perturbation(RngHandle& rng, std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("sample_perturbation: dim must be >= 1");
  Vec delta(dim);
  for (std::size_t i = 0; i < dim; ++i) delta[i] = rng.rademacher();
  return delta;
}

}  // namespace mospsa
