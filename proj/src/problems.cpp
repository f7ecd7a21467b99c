#include "mospsa/problems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mospsa {

TwoObjectiveProblem make_two_quadratic(std::size_t dim, const Vec& c1, const Vec& c2) {
  if (dim == 0 || c1.size() != dim || c2.size() != dim) {
    throw std::invalid_argument("make_two_quadratic: bad dimensions");
  }
  if (c1 == c2) {
    throw std::invalid_argument("make_two_quadratic: centers coincide, trade-off is degenerate");
  }
  auto sq_dist = [](const Vec& theta, const Vec& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      double d = theta[i] - c[i];
      s += d * d;
    }
    return s;
  };
  BlackBoxObjective blackbox(dim, [c1, sq_dist](const Vec& theta) { return sq_dist(theta, c1); });
  WhiteBoxObjective whitebox(
      dim, [c2, sq_dist](const Vec& theta) { return sq_dist(theta, c2); },
      [c2](const Vec& theta) {
        Vec g(theta.size());
        for (std::size_t i = 0; i < theta.size(); ++i) g[i] = 2.0 * (theta[i] - c2[i]);
        return g;
      });
  return TwoObjectiveProblem{dim, std::move(blackbox), std::move(whitebox), zeros(dim)};
}

// Quintic smoothstep saturating exactly at 0 and 1. The range never leaves
// [0, 1], so the nominal front stays the true front; the map is C2 with
// s(0) = 0, s(1/2) = 1/2, s(1) = 1 and a strictly positive derivative on
// (0, 1). Outside the box the objective is constant.
double smooth_clamp01(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double smooth_clamp01_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  double u = t * (1.0 - t);
  return 30.0 * u * u;
}

TwoObjectiveProblem make_concave_front(std::size_t dim) {
  if (dim < 2) throw std::invalid_argument("make_concave_front: dim must be >= 2");
  auto f1 = [](const Vec& theta) { return smooth_clamp01(theta[0]); };
  auto g_of = [dim](const Vec& theta) {
    double s = 0.0;
    for (std::size_t j = 1; j < dim; ++j) s += smooth_clamp01(theta[j]);
    return 1.0 + 9.0 * s / static_cast<double>(dim - 1);
  };
  auto f2 = [f1, g_of](const Vec& theta) {
    double g = g_of(theta);
    double v1 = f1(theta);
    return g * (1.0 - (v1 / g) * (v1 / g));
  };
  auto f2_grad = [f1, g_of, dim](const Vec& theta) {
    double g = g_of(theta);
    double v1 = f1(theta);
    Vec grad(dim, 0.0);
    grad[0] = -2.0 * (v1 / g) * smooth_clamp01_derivative(theta[0]);
    double ratio_sq = (v1 / g) * (v1 / g);
    for (std::size_t j = 1; j < dim; ++j) {
      double dg = 9.0 * smooth_clamp01_derivative(theta[j]) / static_cast<double>(dim - 1);
      grad[j] = dg * (1.0 + ratio_sq);
    }
    return grad;
  };
  Vec theta0(dim, 0.5);
  return TwoObjectiveProblem{dim, BlackBoxObjective(dim, f1), WhiteBoxObjective(dim, f2, f2_grad),
                             std::move(theta0)};
}

// --- toy anonymizer ----------------------------------------------------------

void save_dataset(const ToyDataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open dataset file for writing: " + path);
  for (const ToySample& s : dataset.samples) {
    for (double v : s.x) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << buf << '\t';
    }
    out << s.label << '\t' << s.private_bit << '\n';
  }
  if (!out) throw std::runtime_error("write failed for dataset file: " + path);
}

ToyDataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  ToyDataset data;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::vector<std::string> fields;
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    if (fields.size() < 3) throw std::runtime_error("bad dataset row in " + path);
    ToySample sample;
    sample.x.reserve(fields.size() - 2);
    for (std::size_t i = 0; i + 2 < fields.size(); ++i) sample.x.push_back(std::stod(fields[i]));
    sample.label = std::stoi(fields[fields.size() - 2]);
    sample.private_bit = std::stoi(fields[fields.size() - 1]);
    if (data.feature_dim == 0) data.feature_dim = sample.x.size();
    if (sample.x.size() != data.feature_dim) {
      throw std::runtime_error("inconsistent feature count in " + path);
    }
    data.num_classes = std::max(data.num_classes, sample.label + 1);
    data.samples.push_back(std::move(sample));
  }
  return data;
}

namespace toy {

std::size_t theta_dim(std::size_t feature_dim) { return feature_dim * (feature_dim + 1); }

Vec identity_theta(std::size_t feature_dim) {
  Vec theta(theta_dim(feature_dim), 0.0);
  for (std::size_t i = 0; i < feature_dim; ++i) theta[i * feature_dim + i] = 1.0;
  return theta;
}

namespace {

inline void anonymize(const Vec& theta, const Vec& x, std::size_t d, Vec& y) {
  for (std::size_t i = 0; i < d; ++i) {
    double acc = theta[d * d + i];  // bias
    const double* row = theta.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

inline double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

inline double scorer_ce(const LinearScorer& scorer, const Vec& y, int label) {
  std::size_t n_classes = scorer.weights.size();
  double max_logit = -std::numeric_limits<double>::infinity();
  double logits[64];
  for (std::size_t c = 0; c < n_classes; ++c) {
    logits[c] = dot(scorer.weights[c], y) + scorer.bias[c];
    max_logit = std::max(max_logit, logits[c]);
  }
  double lse = 0.0;
  for (std::size_t c = 0; c < n_classes; ++c) lse += std::exp(logits[c] - max_logit);
  return max_logit + std::log(lse) - logits[static_cast<std::size_t>(label)];
}

inline double reviewer_ce(const LogisticReviewer& reviewer, const Vec& y, int bit) {
  double z = dot(reviewer.weights, y) + reviewer.bias;
  // p*(-log sigma(z)) + (1-p)*(-log(1-sigma(z)))
  return bit ? softplus(-z) : softplus(z);
}

struct SampleTerms {
  double utility_ce = 0.0;
  double privacy_ce = 0.0;
};

template <bool Parallel>
ObjectivePair losses_impl(const ToyDataset& data, const LinearScorer& scorer,
                          const LogisticReviewer& reviewer, const Vec& theta) {
  const std::size_t d = data.feature_dim;
  const std::int64_t n = static_cast<std::int64_t>(data.samples.size());
  std::vector<SampleTerms> terms(data.samples.size());
#pragma omp parallel for schedule(static) if (Parallel)
  for (std::int64_t s = 0; s < n; ++s) {
    const ToySample& sample = data.samples[static_cast<std::size_t>(s)];
    Vec y(d);
    anonymize(theta, sample.x, d, y);
    terms[static_cast<std::size_t>(s)] =
        SampleTerms{scorer_ce(scorer, y, sample.label), reviewer_ce(reviewer, y, sample.private_bit)};
  }
  // Fixed-order accumulation: results are independent of the thread count.
  double utility = 0.0;
  double privacy = 0.0;
  for (const SampleTerms& t : terms) {
    utility += t.utility_ce;
    privacy += t.privacy_ce;
  }
  double inv_n = 1.0 / static_cast<double>(n);
  return ObjectivePair{utility * inv_n, -privacy * inv_n};
}

template <bool Parallel>
Vec privacy_gradient_impl(const ToyDataset& data, const LogisticReviewer& reviewer,
                          const Vec& theta) {
  const std::size_t d = data.feature_dim;
  const std::int64_t n = static_cast<std::int64_t>(data.samples.size());
  // L_privacy = (1/N) sum_s [ p log sigma(z_s) + (1-p) log(1-sigma(z_s)) ],
  // z_s = v . (W x_s + bias) + v0, so dL/dz_s = (p_s - sigma(z_s)) / N and the
  // gradient factors into the outer product v (x-weighted residual mean)^T.
  std::vector<double> residual(data.samples.size());
#pragma omp parallel for schedule(static) if (Parallel)
  for (std::int64_t s = 0; s < n; ++s) {
    const ToySample& sample = data.samples[static_cast<std::size_t>(s)];
    Vec y(d);
    anonymize(theta, sample.x, d, y);
    double z = dot(reviewer.weights, y) + reviewer.bias;
    double sigma = 1.0 / (1.0 + std::exp(-z));
    residual[static_cast<std::size_t>(s)] =
        static_cast<double>(sample.private_bit) - sigma;
  }
  double inv_n = 1.0 / static_cast<double>(n);
  Vec weighted_x(d, 0.0);
  double residual_mean = 0.0;
  for (std::size_t s = 0; s < data.samples.size(); ++s) {
    const Vec& x = data.samples[s].x;
    for (std::size_t j = 0; j < d; ++j) weighted_x[j] += residual[s] * x[j];
    residual_mean += residual[s];
  }
  for (std::size_t j = 0; j < d; ++j) weighted_x[j] *= inv_n;
  residual_mean *= inv_n;

  Vec grad(theta_dim(d), 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) grad[i * d + j] = reviewer.weights[i] * weighted_x[j];
    grad[d * d + i] = reviewer.weights[i] * residual_mean;
  }
  return grad;
}

}  // namespace

ObjectivePair anonymized_losses(const ToyDataset& data, const LinearScorer& scorer,
                                const LogisticReviewer& reviewer, const Vec& theta) {
  return losses_impl<true>(data, scorer, reviewer, theta);
}

ObjectivePair anonymized_losses_serial(const ToyDataset& data, const LinearScorer& scorer,
                                       const LogisticReviewer& reviewer, const Vec& theta) {
  return losses_impl<false>(data, scorer, reviewer, theta);
}

Vec privacy_gradient(const ToyDataset& data, const LogisticReviewer& reviewer, const Vec& theta) {
  return privacy_gradient_impl<true>(data, reviewer, theta);
}

Vec privacy_gradient_serial(const ToyDataset& data, const LogisticReviewer& reviewer,
                            const Vec& theta) {
  return privacy_gradient_impl<false>(data, reviewer, theta);
}

}  // namespace toy

namespace {

ToyDataset synthesize_dataset(RngHandle& rng, const ToyAnonymizerOptions& opt) {
  // Task classes bump features 0..C-1 one-hot style; the private bit shifts
  // the overlapping block 2..5 by +-1, so scrubbing the bit necessarily
  // disturbs class-relevant features.
  ToyDataset data;
  data.feature_dim = opt.feature_dim;
  data.num_classes = opt.num_classes;
  data.samples.resize(opt.n_samples);
  for (std::size_t s = 0; s < opt.n_samples; ++s) {
    ToySample& sample = data.samples[s];
    sample.label = std::min<int>(static_cast<int>(rng.uniform01() * opt.num_classes),
                                 opt.num_classes - 1);
    sample.private_bit = rng.uniform01() < 0.5 ? 1 : 0;
    sample.x.resize(opt.feature_dim);
    for (std::size_t j = 0; j < opt.feature_dim; ++j) sample.x[j] = 0.5 * rng.normal();
    sample.x[static_cast<std::size_t>(sample.label)] += 2.0;
    double shift = sample.private_bit ? 1.0 : -1.0;
    for (std::size_t j = 2; j < std::min<std::size_t>(6, opt.feature_dim); ++j) {
      sample.x[j] += shift;
    }
  }
  return data;
}

bool dataset_is_degenerate(const ToyDataset& data) {
  std::vector<int> class_count(static_cast<std::size_t>(data.num_classes), 0);
  int bit_count[2] = {0, 0};
  for (const ToySample& s : data.samples) {
    class_count[static_cast<std::size_t>(s.label)]++;
    bit_count[s.private_bit]++;
  }
  if (bit_count[0] == 0 || bit_count[1] == 0) return true;
  return std::any_of(class_count.begin(), class_count.end(), [](int c) { return c == 0; });
}

LinearScorer train_scorer(const ToyDataset& data, int steps, double lr) {
  const std::size_t d = data.feature_dim;
  const std::size_t n_classes = static_cast<std::size_t>(data.num_classes);
  LinearScorer scorer{std::vector<Vec>(n_classes, Vec(d, 0.0)), Vec(n_classes, 0.0)};
  std::vector<double> probs(n_classes);
  std::vector<Vec> grad_w(n_classes, Vec(d, 0.0));
  Vec grad_b(n_classes, 0.0);
  double inv_n = 1.0 / static_cast<double>(data.samples.size());
  for (int step = 0; step < steps; ++step) {
    for (auto& g : grad_w) std::fill(g.begin(), g.end(), 0.0);
    std::fill(grad_b.begin(), grad_b.end(), 0.0);
    for (const ToySample& s : data.samples) {
      double max_logit = -std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < n_classes; ++c) {
        probs[c] = dot(scorer.weights[c], s.x) + scorer.bias[c];
        max_logit = std::max(max_logit, probs[c]);
      }
      double lse = 0.0;
      for (std::size_t c = 0; c < n_classes; ++c) {
        probs[c] = std::exp(probs[c] - max_logit);
        lse += probs[c];
      }
      for (std::size_t c = 0; c < n_classes; ++c) {
        double err = probs[c] / lse - (static_cast<int>(c) == s.label ? 1.0 : 0.0);
        for (std::size_t j = 0; j < d; ++j) grad_w[c][j] += err * s.x[j];
        grad_b[c] += err;
      }
    }
    for (std::size_t c = 0; c < n_classes; ++c) {
      for (std::size_t j = 0; j < d; ++j) scorer.weights[c][j] -= lr * grad_w[c][j] * inv_n;
      scorer.bias[c] -= lr * grad_b[c] * inv_n;
    }
  }
  return scorer;
}

LogisticReviewer train_reviewer(const ToyDataset& data, int steps, double lr) {
  const std::size_t d = data.feature_dim;
  LogisticReviewer reviewer{Vec(d, 0.0), 0.0};
  double inv_n = 1.0 / static_cast<double>(data.samples.size());
  Vec grad_w(d, 0.0);
  for (int step = 0; step < steps; ++step) {
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    double grad_b = 0.0;
    for (const ToySample& s : data.samples) {
      double z = dot(reviewer.weights, s.x) + reviewer.bias;
      double err = 1.0 / (1.0 + std::exp(-z)) - static_cast<double>(s.private_bit);
      for (std::size_t j = 0; j < d; ++j) grad_w[j] += err * s.x[j];
      grad_b += err;
    }
    for (std::size_t j = 0; j < d; ++j) reviewer.weights[j] -= lr * grad_w[j] * inv_n;
    reviewer.bias -= lr * grad_b * inv_n;
  }
  return reviewer;
}

}  // namespace

ToyAnonymizerProblem make_toy_anonymizer(RngHandle& rng, const ToyAnonymizerOptions& options) {
  if (options.n_samples < 100) {
    throw std::invalid_argument("make_toy_anonymizer: need at least 100 samples");
  }
  if (options.feature_dim < 2 || options.feature_dim > 64) {
    throw std::invalid_argument("make_toy_anonymizer: feature_dim out of range");
  }
  if (options.num_classes < 2 ||
      static_cast<std::size_t>(options.num_classes) > options.feature_dim) {
    throw std::invalid_argument("make_toy_anonymizer: num_classes out of range");
  }

  ToyDataset data;
  for (std::uint64_t attempt = 0;; ++attempt) {
    RngHandle synth = rng.derive(attempt);
    data = synthesize_dataset(synth, options);
    if (!dataset_is_degenerate(data)) break;
    if (attempt > 64) throw std::runtime_error("make_toy_anonymizer: synthesis keeps degenerating");
  }

  auto dataset = std::make_shared<const ToyDataset>(std::move(data));
  auto scorer = std::make_shared<const LinearScorer>(train_scorer(*dataset, 400, 0.5));
  auto reviewer = std::make_shared<const LogisticReviewer>(train_reviewer(*dataset, 400, 0.5));

  const std::size_t d = options.feature_dim;
  const std::size_t p_dim = toy::theta_dim(d);
  BlackBoxObjective blackbox(p_dim, [dataset, scorer, reviewer](const Vec& theta) {
    return toy::anonymized_losses(*dataset, *scorer, *reviewer, theta).blackbox;
  });
  WhiteBoxObjective whitebox(
      p_dim,
      [dataset, scorer, reviewer](const Vec& theta) {
        return toy::anonymized_losses(*dataset, *scorer, *reviewer, theta).whitebox;
      },
      [dataset, reviewer](const Vec& theta) {
        return toy::privacy_gradient(*dataset, *reviewer, theta);
      });

  Vec theta0 = toy::identity_theta(d);
  RngHandle init = rng.derive(0x7E7A0ULL);
  for (double& v : theta0) v += options.init_noise * init.normal();

  ObjectivePair raw = toy::anonymized_losses(*dataset, *scorer, *reviewer, toy::identity_theta(d));

  ToyAnonymizerProblem result{
      TwoObjectiveProblem{p_dim, std::move(blackbox), std::move(whitebox), std::move(theta0)},
      dataset, scorer, reviewer, raw};
  return result;
}

// --- single-objective benchmark ----------------------------------------------

ScalarBenchmark noisy_sphere_benchmark(std::size_t dim, double noise_scale, RngHandle rng) {
  if (dim == 0) throw std::invalid_argument("noisy_sphere_benchmark: dim must be >= 1");
  auto sphere = [](const Vec& theta) { return dot(theta, theta); };
  BlackBoxObjective inner(dim, sphere);
  BlackBoxObjective objective =
      noise_scale > 0.0 ? make_noisy(inner, noise_scale, rng) : inner;
  return ScalarBenchmark{std::move(objective), sphere, Vec(dim, 0.7)};
}

EsResult es_baseline(const BlackBoxObjective& obj,
                     const std::function<double(const Vec&)>& monitor, const Vec& theta0,
                     const EsOptions& options, RngHandle& rng) {
  if (options.population < 2) throw std::invalid_argument("es_baseline: population must be >= 2");
  if (!(options.step_scale > 0.0)) throw std::invalid_argument("es_baseline: step_scale must be > 0");

  EsResult result;
  result.theta = theta0;
  long long calls_before = obj.calls();
  Vec offspring(theta0.size());
  Vec best(theta0.size());

  for (int k = 1; k <= options.iterations; ++k) {
    double best_value = std::numeric_limits<double>::infinity();
    bool complete = true;
    for (int p = 0; p < options.population; ++p) {
      for (std::size_t i = 0; i < offspring.size(); ++i) {
        offspring[i] = result.theta[i] + options.step_scale * rng.normal();
      }
      double v;
      try {
        v = obj.value(offspring);
      } catch (const BudgetExceededError&) {
        result.truncated = true;
        complete = false;
        break;
      }
      if (v < best_value) {
        best_value = v;
        best = offspring;
      }
    }
    if (!complete) break;
    double loss_at_theta = monitor ? monitor(result.theta) : best_value;
    result.trajectory.push_back(StepRecord{k, loss_at_theta,
                                           std::numeric_limits<double>::quiet_NaN(), 1, 0.0,
                                           options.step_scale, obj.calls()});
    result.theta = best;  // comma selection: always move to the best offspring
    if (!all_finite(result.theta) || l2_norm(result.theta) > options.divergence_norm) {
      throw DivergenceError(k, "evolution strategy iterate diverged");
    }
  }
  result.calls_used = obj.calls() - calls_before;
  return result;
}

}  // namespace mospsa
