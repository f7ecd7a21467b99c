#include "mospsa/pareto.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mospsa {

namespace {

inline bool nondominated_at(const std::vector<ObjectivePair>& pairs, std::size_t i) {
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    if (j != i && dominates(pairs[j], pairs[i])) return false;
  }
  return true;
}

}  // namespace

std::vector<std::uint8_t> front_mask_serial(const std::vector<ObjectivePair>& pairs) {
  std::vector<std::uint8_t> mask(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    mask[i] = nondominated_at(pairs, i) ? 1 : 0;
  }
  return mask;
}

std::vector<std::uint8_t> front_mask(const std::vector<ObjectivePair>& pairs) {
  std::vector<std::uint8_t> mask(pairs.size());
  const std::int64_t n = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) {
    mask[static_cast<std::size_t>(i)] =
        nondominated_at(pairs, static_cast<std::size_t>(i)) ? 1 : 0;
  }
  return mask;
}

ParetoFront pareto_front(const std::vector<CandidatePoint>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("pareto_front: empty candidate set");
  std::vector<ObjectivePair> pairs;
  pairs.reserve(candidates.size());
  for (const CandidatePoint& c : candidates) pairs.push_back(c.pair);
  std::vector<std::uint8_t> mask = front_mask(pairs);
  ParetoFront front;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (mask[i]) front.points.push_back(candidates[i]);
  }
  return front;
}

std::vector<Vec> make_grid(const Vec& lo, const Vec& hi, int points_per_axis) {
  if (lo.size() != hi.size() || lo.empty()) {
    throw std::invalid_argument("make_grid: bad bounds");
  }
  if (points_per_axis < 1) throw std::invalid_argument("make_grid: points_per_axis must be >= 1");
  std::size_t dim = lo.size();
  std::size_t total = 1;
  for (std::size_t d = 0; d < dim; ++d) total *= static_cast<std::size_t>(points_per_axis);
  std::vector<Vec> grid;
  grid.reserve(total);
  Vec point(dim);
  std::vector<int> idx(dim, 0);
  for (std::size_t n = 0; n < total; ++n) {
    for (std::size_t d = 0; d < dim; ++d) {
      double t = points_per_axis == 1
                     ? 0.0
                     : static_cast<double>(idx[d]) / static_cast<double>(points_per_axis - 1);
      point[d] = lo[d] + t * (hi[d] - lo[d]);
    }
    grid.push_back(point);
    for (std::size_t d = dim; d-- > 0;) {
      if (++idx[d] < points_per_axis) break;
      idx[d] = 0;
    }
  }
  return grid;
}

std::vector<ObjectivePair> evaluate_grid_serial(const TwoObjectiveProblem& problem,
                                                const std::vector<Vec>& grid) {
  std::vector<ObjectivePair> pairs(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) pairs[i] = evaluate_pair(problem, grid[i]);
  return pairs;
}

std::vector<ObjectivePair> evaluate_grid(const TwoObjectiveProblem& problem,
                                         const std::vector<Vec>& grid) {
  std::vector<ObjectivePair> pairs(grid.size());
  const std::int64_t n = static_cast<std::int64_t>(grid.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      pairs[static_cast<std::size_t>(i)] =
          evaluate_pair(problem, grid[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical(mospsa_grid_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return pairs;
}

std::size_t grid_argmin(const std::vector<ObjectivePair>& pairs, Scalarization kind,
                        const ScalarizationConfig& config) {
  if (pairs.empty()) throw std::invalid_argument("grid_argmin: empty pair set");
  std::size_t best = 0;
  double best_value = scalarize_value(kind, pairs[0], config);
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    double v = scalarize_value(kind, pairs[i], config);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

bool Theorem1Report::all_nondominated() const {
  for (const Entry& e : entries) {
    if (!e.nondominated) return false;
  }
  return true;
}

Theorem1Report verify_theorem1(const std::vector<ObjectivePair>& grid_pairs,
                               const std::vector<std::pair<double, double>>& lambdas,
                               const ScalarizationConfig& base_config, Scalarization kind,
                               int dense_sweep_points) {
  if (grid_pairs.empty()) throw std::invalid_argument("verify_theorem1: empty grid");
  for (const auto& [l1, l2] : lambdas) {
    if (!(l1 > 0.0) || !(l2 > 0.0)) {
      throw std::invalid_argument("verify_theorem1: weights must be strictly positive");
    }
  }

  std::vector<std::uint8_t> mask = front_mask(grid_pairs);
  Theorem1Report report;
  report.grid_size = grid_pairs.size();
  for (std::uint8_t m : mask) report.front_size += m;

  for (const auto& [l1, l2] : lambdas) {
    ScalarizationConfig cfg = base_config;
    cfg.lambda1 = l1;
    cfg.lambda2 = l2;
    std::size_t argmin = grid_argmin(grid_pairs, kind, cfg);
    report.entries.push_back(Theorem1Report::Entry{l1, l2, argmin, grid_pairs[argmin],
                                                   mask[argmin] != 0});
  }

  if (dense_sweep_points > 0 && report.front_size > 0) {
    std::unordered_set<std::size_t> hit;
    for (int i = 1; i <= dense_sweep_points; ++i) {
      double l1 = static_cast<double>(i) / (dense_sweep_points + 1);
      ScalarizationConfig cfg = base_config;
      cfg.lambda1 = l1;
      cfg.lambda2 = 1.0 - l1;
      std::size_t argmin = grid_argmin(grid_pairs, kind, cfg);
      if (mask[argmin]) hit.insert(argmin);
    }
    report.front_coverage =
        static_cast<double>(hit.size()) / static_cast<double>(report.front_size);
  }
  return report;
}

}  // namespace mospsa
