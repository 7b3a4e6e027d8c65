#ifndef SLAMRANK_BATCH_TRAINER_HPP_
#define SLAMRANK_BATCH_TRAINER_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "slamrank/types.hpp"

// Regularized empirical SLAM minimization,
//
//   min_w  (lambda/2) ||w||^2 + (1/n) sum_i phi_v(X_i w, R_i),
//
// solved by projected subgradient descent on the l2 ball of radius B with
// step B/(L sqrt(t)) and suffix averaging.

namespace slamrank {

struct BatchConfig {
  double lambda = 0.0;
  bool lambda_auto = false;  // derive lambda from (n, B, 2 R_X)
  double ball_radius = 1e3;  // B; defaults large to approximate the
                             // unconstrained objective
  int epochs = 50;
  RankingMeasure measure;
  double delta = 1.0;
  std::uint64_t seed = 1;
};

struct FitResult {
  std::vector<double> w;
  double objective_value = 0.0;
  std::vector<double> objective_trace;  // per-epoch suffix-average objective
  double lambda_used = 0.0;
  double train_metric_mean = 0.0;
};

double objective(std::span<const double> w,
                 std::span<const QueryInstance> data, double lambda,
                 const RankingMeasure& measure, double delta = 1.0);

// Closed-form regularization weight sqrt((4 L2^2 / n) / (B^2/2 + 4 B^2/n)),
// O(1/sqrt(n)); L2 is the l2 Lipschitz constant of the loss in w (2 R_X for
// SLAM members).
double auto_lambda(long long n, double b, double l2);

FitResult fit(std::span<const QueryInstance> data, const BatchConfig& cfg);

}  // namespace slamrank

#endif  // SLAMRANK_BATCH_TRAINER_HPP_
