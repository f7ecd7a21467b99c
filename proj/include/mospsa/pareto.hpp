#ifndef MOSPSA_PARETO_HPP
#define MOSPSA_PARETO_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "mospsa/objective.hpp"
#include "mospsa/scalarize.hpp"
#include "mospsa/vec.hpp"

namespace mospsa {

// a dominates b: no worse in both losses, strictly better in at least one.
inline bool dominates(const ObjectivePair& a, const ObjectivePair& b) {
  return a.blackbox <= b.blackbox && a.whitebox <= b.whitebox &&
         (a.blackbox < b.blackbox || a.whitebox < b.whitebox);
}

// Non-domination mask over a candidate set, O(n^2) pairwise. The OpenMP
// version parallelizes over candidates; the serial version is the reference
// kept for testing and for the kernel benchmark. Both agree bit-for-bit.
std::vector<std::uint8_t> front_mask(const std::vector<ObjectivePair>& pairs);
std::vector<std::uint8_t> front_mask_serial(const std::vector<ObjectivePair>& pairs);

struct CandidatePoint {
  Vec theta;
  ObjectivePair pair;
};

struct ParetoFront {
  std::vector<CandidatePoint> points;
};

// Non-dominated subset of a non-empty candidate collection.
ParetoFront pareto_front(const std::vector<CandidatePoint>& candidates);

// Axis-aligned grid of points_per_axis^dim parameter vectors, row-major with
// the last coordinate varying fastest.
std::vector<Vec> make_grid(const Vec& lo, const Vec& hi, int points_per_axis);

// Objective pairs over a grid of candidates. Parallel over points (counter
// charges are linearizable); deterministic objectives only.
std::vector<ObjectivePair> evaluate_grid(const TwoObjectiveProblem& problem,
                                         const std::vector<Vec>& grid);
std::vector<ObjectivePair> evaluate_grid_serial(const TwoObjectiveProblem& problem,
                                                const std::vector<Vec>& grid);

struct Theorem1Report {
  struct Entry {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::size_t argmin_index = 0;
    ObjectivePair pair;
    bool nondominated = false;
  };
  std::vector<Entry> entries;
  std::size_t grid_size = 0;
  std::size_t front_size = 0;
  // "if" direction, spot-checked: fraction of front points that are the
  // scalarization argmin for some weight in a dense sweep.
  double front_coverage = 0.0;

  bool all_nondominated() const;
};

// Empirical check of the Pareto-optimality guarantee: for each weight pair,
// the grid argmin of the scalarized objective must be non-dominated within
// the grid. Weights must be strictly positive (they need not be normalized).
// Dominance and argmin are always relative to the supplied grid.
Theorem1Report verify_theorem1(const std::vector<ObjectivePair>& grid_pairs,
                               const std::vector<std::pair<double, double>>& lambdas,
                               const ScalarizationConfig& base_config,
                               Scalarization kind = Scalarization::augmented_tchebycheff,
                               int dense_sweep_points = 199);

// Index of the scalarization minimum over a pair set; ties resolve to the
// lowest index.
std::size_t grid_argmin(const std::vector<ObjectivePair>& pairs, Scalarization kind,
                        const ScalarizationConfig& config);

}  // namespace mospsa

#endif
