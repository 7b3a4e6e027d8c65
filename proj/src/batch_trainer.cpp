#include "slamrank/batch_trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "slamrank/ranking_metrics.hpp"
#include "slamrank/slam_surrogate.hpp"

namespace slamrank {

namespace {

double stream_max_row_norm(std::span<const QueryInstance> data) {
  double r_x = 0.0;
  for (const QueryInstance& q : data) {
    r_x = std::max(r_x, q.max_row_norm());
  }
  return r_x;
}

// Scale back onto the l2 ball; the trailing nudge keeps the recomputed norm
// at or below the radius despite rounding in the scale factor.
void project_onto_ball(std::vector<double>& w, double radius) {
  double norm = l2_norm(w);
  if (norm <= radius) return;
  double factor = radius / norm;
  for (double& x : w) x *= factor;
  while (l2_norm(w) > radius) {
    for (double& x : w) x *= 1.0 - 1e-15;
  }
}

}  // namespace

double objective(std::span<const double> w,
                 std::span<const QueryInstance> data, double lambda,
                 const RankingMeasure& measure, double delta) {
  if (data.empty()) {
    throw InvalidArgumentError("objective requires a nonempty dataset");
  }
  if (lambda < 0.0) {
    throw InvalidArgumentError("lambda must be nonnegative");
  }
  double loss = 0.0;
  for (const QueryInstance& q : data) {
    loss += slam_loss(q.scores(w), q.relevance,
                      weights_for(measure, q.relevance), delta);
  }
  const double nrm = l2_norm(w);
  return 0.5 * lambda * nrm * nrm + loss / static_cast<double>(data.size());
}

double auto_lambda(long long n, double b, double l2) {
  if (n < 1 || b <= 0.0 || l2 <= 0.0) {
    throw InvalidArgumentError("auto_lambda requires n >= 1, B > 0, L2 > 0");
  }
  const double nd = static_cast<double>(n);
  const double numerator = 4.0 * l2 * l2 / nd;
  const double denominator = b * b / 2.0 + 4.0 * b * b / nd;
  return std::sqrt(numerator / denominator);
}

FitResult fit(std::span<const QueryInstance> data, const BatchConfig& cfg) {
  if (data.empty()) {
    throw InvalidArgumentError("fit requires a nonempty dataset");
  }
  if (cfg.epochs < 1) {
    throw InvalidArgumentError("epochs must be >= 1");
  }
  if (cfg.ball_radius <= 0.0) {
    throw InvalidArgumentError("ball radius must be positive");
  }
  const int d = data.front().num_features;
  for (const QueryInstance& q : data) {
    if (q.num_features != d) {
      throw DimensionError("feature dimension varies across queries");
    }
  }
  const long long n = static_cast<long long>(data.size());
  const double r_x = stream_max_row_norm(data);
  const double lambda = cfg.lambda_auto
                            ? auto_lambda(n, cfg.ball_radius,
                                          2.0 * std::max(r_x, 1e-12))
                            : cfg.lambda;
  if (lambda < 0.0) {
    throw InvalidArgumentError("lambda must be nonnegative");
  }

  std::vector<SlamWeights> weights;
  weights.reserve(data.size());
  for (const QueryInstance& q : data) {
    weights.push_back(weights_for(cfg.measure, q.relevance));
  }

  // Lipschitz constant of the regularized loss on the ball.
  const double step_l = lambda * cfg.ball_radius + 2.0 * std::max(r_x, 1e-12);

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> visit(data.size());
  std::iota(visit.begin(), visit.end(), 0);

  std::vector<double> w(d, 0.0);

  // Per-epoch iterate sums for suffix averaging over the last half of steps.
  std::vector<std::vector<double>> epoch_sums;
  std::vector<long long> epoch_steps;

  FitResult result;
  result.lambda_used = lambda;
  std::vector<double> best_w(d, 0.0);
  double best_objective = objective(best_w, data, lambda, cfg.measure,
                                    cfg.delta);

  long long t = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(visit.begin(), visit.end(), rng);
    std::vector<double> sum(d, 0.0);
    for (std::size_t idx : visit) {
      ++t;
      const QueryInstance& q = data[idx];
      std::vector<double> g =
          slam_subgradient_params(q, w, weights[idx], cfg.delta);
      const double eta =
          cfg.ball_radius / (step_l * std::sqrt(static_cast<double>(t)));
      for (int f = 0; f < d; ++f) {
        w[f] -= eta * (g[f] + lambda * w[f]);
      }
      project_onto_ball(w, cfg.ball_radius);
      for (int f = 0; f < d; ++f) sum[f] += w[f];
    }
    epoch_sums.push_back(std::move(sum));
    epoch_steps.push_back(n);

    // Average the iterates from the most recent half of all steps so far,
    // rounded to whole epochs.
    std::vector<double> avg(d, 0.0);
    long long avg_count = 0;
    long long needed = (t + 1) / 2;
    for (int e = epoch; e >= 0 && needed > 0; --e) {
      for (int f = 0; f < d; ++f) avg[f] += epoch_sums[e][f];
      avg_count += epoch_steps[e];
      needed -= epoch_steps[e];
    }
    for (int f = 0; f < d; ++f) avg[f] /= static_cast<double>(avg_count);
    project_onto_ball(avg, cfg.ball_radius);

    // Subgradient steps are not descent steps; the incumbent is the best
    // suffix average seen so far and the trace reports its objective.
    const double obj = objective(avg, data, lambda, cfg.measure, cfg.delta);
    if (obj < best_objective) {
      best_objective = obj;
      best_w = avg;
    }
    result.objective_trace.push_back(best_objective);
  }

  result.w = std::move(best_w);
  result.objective_value = best_objective;
  double metric_sum = 0.0;
  for (const QueryInstance& q : data) {
    metric_sum += measure_value(q.scores(result.w), q.relevance, cfg.measure);
  }
  result.train_metric_mean = metric_sum / static_cast<double>(data.size());
  return result;
}

}  // namespace slamrank
