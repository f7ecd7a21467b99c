#ifndef MOSPSA_VEC_HPP
#define MOSPSA_VEC_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace mospsa {

// Parameter vectors are plain dense double vectors. All arithmetic is
// 64-bit; entries are expected to stay finite (callers guard at the
// optimizer boundary, see divergence handling in scalarize.hpp).
using Vec = std::vector<double>;

inline Vec zeros(std::size_t n) { return Vec(n, 0.0); }

inline bool all_finite(const Vec& x) {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

inline void require_same_dim(const Vec& x, const Vec& y, const char* what) {
  if (x.size() != y.size()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
}

// alpha*x + y, inputs untouched.
inline Vec axpy(double alpha, const Vec& x, const Vec& y) {
  require_same_dim(x, y, "axpy");
  if (!std::isfinite(alpha)) throw std::invalid_argument("axpy: non-finite alpha");
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = alpha * x[i] + y[i];
  return out;
}

inline Vec scale(double alpha, const Vec& x) {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = alpha * x[i];
  return out;
}

inline double dot(const Vec& x, const Vec& y) {
  require_same_dim(x, y, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double l2_norm(const Vec& x) { return std::sqrt(dot(x, x)); }

// cos of the angle between x and y. Degenerate (zero-norm) inputs yield
// nullopt so callers have to pick their own fallback explicitly.
inline std::optional<double> cosine(const Vec& x, const Vec& y) {
  require_same_dim(x, y, "cosine");
  double nx = l2_norm(x);
  double ny = l2_norm(y);
  if (nx == 0.0 || ny == 0.0) return std::nullopt;
  double c = dot(x, y) / (nx * ny);
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return c;
}

}  // namespace mospsa

#endif
