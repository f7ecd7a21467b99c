#ifndef MOSPSA_PROBLEMS_HPP
#define MOSPSA_PROBLEMS_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mospsa/objective.hpp"
#include "mospsa/record.hpp"
#include "mospsa/rng.hpp"
#include "mospsa/vec.hpp"

namespace mospsa {

// Convex trade-off test bed: f1 = ||theta - c1||^2 exposed value-only,
// f2 = ||theta - c2||^2 with its analytic gradient. The Pareto set is the
// segment between the centers.
TwoObjectiveProblem make_two_quadratic(std::size_t dim, const Vec& c1, const Vec& c2);

// Concave-front test bed (ZDT2-style): f1 = s(theta_1),
// g = 1 + 9 * mean(s(theta_2..theta_n)), f2 = g * (1 - (f1/g)^2), where s is
// a smooth squash onto [0, 1] (quintic smoothstep), so the white-box gradient
// exists everywhere and the range never escapes the box. The true front
// (g = 1) is f2 = 1 - f1^2, concave, on which weighted sums only ever pick
// the extremes. f1 is value-only; f2 carries the gradient.
TwoObjectiveProblem make_concave_front(std::size_t dim);

// Smooth clamp used by the concave-front problem, exposed for tests.
double smooth_clamp01(double t);
double smooth_clamp01_derivative(double t);

// --- toy anonymizer ----------------------------------------------------------

struct ToySample {
  Vec x;
  int label = 0;
  int private_bit = 0;
};

struct ToyDataset {
  std::vector<ToySample> samples;
  std::size_t feature_dim = 0;
  int num_classes = 0;
};

// Columnar text fixture: one sample per line, features then task label then
// private bit, tab-separated.
void save_dataset(const ToyDataset& dataset, const std::string& path);
ToyDataset load_dataset(const std::string& path);

// Frozen linear multi-class scorer (utility stand-in) and frozen logistic
// private-bit reviewer. Both are trained on raw data at construction and
// never updated afterwards.
struct LinearScorer {
  std::vector<Vec> weights;  // one row per class
  Vec bias;
};

struct LogisticReviewer {
  Vec weights;
  double bias = 0.0;
};

// theta layout: row-major D x D anonymizer matrix, then D bias entries.
namespace toy {
std::size_t theta_dim(std::size_t feature_dim);
Vec identity_theta(std::size_t feature_dim);
// Mean cross-entropy of the scorer and negated mean cross-entropy of the
// reviewer on anonymized samples W x + bias. The parallel versions compute
// per-sample terms concurrently and accumulate in a fixed order, so results
// do not depend on the thread count.
ObjectivePair anonymized_losses(const ToyDataset& data, const LinearScorer& scorer,
                                const LogisticReviewer& reviewer, const Vec& theta);
ObjectivePair anonymized_losses_serial(const ToyDataset& data, const LinearScorer& scorer,
                                       const LogisticReviewer& reviewer, const Vec& theta);
Vec privacy_gradient(const ToyDataset& data, const LogisticReviewer& reviewer, const Vec& theta);
Vec privacy_gradient_serial(const ToyDataset& data, const LogisticReviewer& reviewer,
                            const Vec& theta);
}  // namespace toy

struct ToyAnonymizerProblem {
  TwoObjectiveProblem problem;
  std::shared_ptr<const ToyDataset> dataset;
  std::shared_ptr<const LinearScorer> scorer;
  std::shared_ptr<const LogisticReviewer> reviewer;
  ObjectivePair raw_losses;  // losses of the frozen models on raw data
};

struct ToyAnonymizerOptions {
  std::size_t n_samples = 1000;
  std::size_t feature_dim = 8;
  int num_classes = 4;
  double init_noise = 0.01;  // theta0 = identity + this much Gaussian noise
};

// Synthesizes a labeled dataset whose task classes live on one feature block
// and whose private bit lives on an overlapping block, pre-trains and
// freezes the scorer and reviewer on raw data, and wires the pair of losses:
// black-box mean scorer cross-entropy, white-box negated reviewer
// cross-entropy with its exact gradient through the anonymizer.
ToyAnonymizerProblem make_toy_anonymizer(RngHandle& rng, const ToyAnonymizerOptions& options = {});

// --- single-objective benchmark ----------------------------------------------

struct ScalarBenchmark {
  BlackBoxObjective objective;                   // counted, possibly noisy
  std::function<double(const Vec&)> true_loss;   // uncounted monitor channel
  Vec theta0;
};

// f(theta) = ||theta||^2 plus Gaussian observation noise. theta0 defaults to
// 0.7 in every coordinate.
ScalarBenchmark noisy_sphere_benchmark(std::size_t dim, double noise_scale, RngHandle rng);

// --- minimal evolution strategy baseline ---------------------------------------

struct EsOptions {
  int population = 10;
  double step_scale = 0.05;
  int iterations = 1000;
  double divergence_norm = 1e6;
};

struct EsResult {
  Vec theta;
  long long calls_used = 0;
  std::vector<StepRecord> trajectory;
  bool truncated = false;
};

// Isotropic (1, population) ES: sample Gaussian offspring around the current
// point, evaluate all of them, move to the best offspring. Exactly
// population calls per iteration.
EsResult es_baseline(const BlackBoxObjective& obj,
                     const std::function<double(const Vec&)>& monitor, const Vec& theta0,
                     const EsOptions& options, RngHandle& rng);

}  // namespace mospsa

#endif
