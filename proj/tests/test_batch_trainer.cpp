#include <cmath>
#include <random>

#include "doctest.h"
#include "slamrank/batch_trainer.hpp"
#include "slamrank/data_io.hpp"
#include "slamrank/ranking_metrics.hpp"
#include "slamrank/slam_surrogate.hpp"
#include "test_util.hpp"

using namespace slamrank;

namespace {

std::vector<QueryInstance> separable_queries(int n, int m, int d,
                                             std::uint64_t seed) {
  SyntheticSpec spec;
  spec.num_queries = n;
  spec.num_docs = m;
  spec.num_features = d;
  spec.gamma = 1.0;
  spec.grades = {0, 1};
  spec.seed = seed;
  return generate_synthetic(spec).data.queries;
}

}  // namespace

TEST_CASE("objective at the zero parameter") {
  // At w = 0 every orderable document pays exactly its weight.
  std::vector<QueryInstance> data{
      test::make_query({{1.0, 0.0}, {0.0, 1.0}}, {1, 0}),
      test::make_query({{1.0, 1.0}, {2.0, 0.0}}, {1, 1})};
  const std::vector<double> w{0.0, 0.0};
  const SlamWeights v = weights_ndcg({1, 0});
  const double expected = v.sum() / 2.0;  // second query is degenerate
  CHECK(objective(w, data, 0.0, RankingMeasure::ndcg()) ==
        doctest::Approx(expected).epsilon(1e-12));
  // The regularizer contributes nothing at w = 0 for any lambda.
  CHECK(objective(w, data, 5.0, RankingMeasure::ndcg()) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK_THROWS_AS(objective(w, {}, 0.0, RankingMeasure::ndcg()),
                  InvalidArgumentError);
}

TEST_CASE("scaling a separating parameter never increases the loss term") {
  const auto data = separable_queries(20, 4, 5, 5);
  SyntheticSpec spec;  // regenerate to recover u_star
  spec.num_queries = 20;
  spec.num_docs = 4;
  spec.num_features = 5;
  spec.gamma = 1.0;
  spec.grades = {0, 1};
  spec.seed = 5;
  const SyntheticData synth = generate_synthetic(spec);
  std::vector<double> u = synth.u_star;
  for (double& x : u) x /= synth.gamma_realized;
  const double base = objective(u, synth.data.queries, 0.0,
                                RankingMeasure::map());
  CHECK(base == 0.0);
  std::vector<double> scaled = u;
  for (double& x : scaled) x *= 3.0;
  CHECK(objective(scaled, synth.data.queries, 0.0, RankingMeasure::map()) <=
        base + 1e-12);
}

TEST_CASE("auto_lambda closed form") {
  CHECK(auto_lambda(100, 1.0, 2.0) ==
        doctest::Approx(0.5443311).epsilon(1e-6));
  CHECK(auto_lambda(1, 1.0, 1.0) == doctest::Approx(0.9428090).epsilon(1e-6));
  // Dominant 1/sqrt(n) scaling: quadrupling n roughly halves lambda.
  const double l1 = auto_lambda(1000, 2.0, 1.0);
  const double l4 = auto_lambda(4000, 2.0, 1.0);
  CHECK(l1 / l4 == doctest::Approx(2.0).epsilon(0.01));
  CHECK_THROWS_AS(auto_lambda(0, 1.0, 1.0), InvalidArgumentError);
  CHECK_THROWS_AS(auto_lambda(10, 0.0, 1.0), InvalidArgumentError);
}

TEST_CASE("fit drives the training loss to zero on separable data") {
  const auto data = separable_queries(60, 4, 5, 7);
  BatchConfig cfg;
  cfg.lambda = 0.0;
  cfg.measure = RankingMeasure::map();
  cfg.epochs = 60;
  cfg.ball_radius = 50.0;
  cfg.seed = 3;
  const FitResult result = fit(data, cfg);
  CHECK(result.objective_value < 5e-3);
  CHECK(result.train_metric_mean > 0.99);
}

TEST_CASE("a degenerate-only dataset keeps the parameter at zero") {
  std::vector<QueryInstance> data{
      test::make_query({{1.0, 2.0}, {0.5, 0.25}}, {1, 1})};
  BatchConfig cfg;
  cfg.lambda = 0.5;
  cfg.measure = RankingMeasure::ndcg();
  cfg.epochs = 5;
  const FitResult result = fit(data, cfg);
  CHECK(result.w == std::vector<double>{0.0, 0.0});
  CHECK(result.objective_value == 0.0);
}

TEST_CASE("iterates stay inside the ball") {
  const auto data = separable_queries(30, 4, 5, 11);
  BatchConfig cfg;
  cfg.lambda = 0.1;
  cfg.measure = RankingMeasure::map();
  cfg.epochs = 20;
  cfg.ball_radius = 0.05;  // small enough to force projections
  const FitResult result = fit(data, cfg);
  CHECK(l2_norm(result.w) <= cfg.ball_radius);
}

TEST_CASE("fit beats random search over the feasible ball") {
  const auto data = separable_queries(40, 4, 5, 13);
  BatchConfig cfg;
  cfg.lambda = 0.05;
  cfg.measure = RankingMeasure::map();
  cfg.epochs = 40;
  cfg.ball_radius = 5.0;
  cfg.seed = 9;
  const FitResult result = fit(data, cfg);

  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> radius(0.0, 1.0);
  double best_random = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> w(5);
    for (double& x : w) x = normal(rng);
    const double norm = l2_norm(w);
    const double target = cfg.ball_radius * std::cbrt(radius(rng));
    if (norm > 0) {
      for (double& x : w) x *= target / norm;
    }
    best_random = std::min(
        best_random, objective(w, data, cfg.lambda, cfg.measure));
  }
  CHECK(result.objective_value <= best_random + 1e-6);
}

TEST_CASE("suffix-averaged objective trace is monotone within tolerance") {
  const auto data = separable_queries(50, 5, 6, 19);
  BatchConfig cfg;
  cfg.lambda_auto = true;
  cfg.measure = RankingMeasure::ndcg();
  cfg.epochs = 40;
  cfg.ball_radius = 10.0;
  cfg.seed = 21;
  const FitResult result = fit(data, cfg);
  REQUIRE(result.objective_trace.size() == 40);
  for (std::size_t e = 1; e < result.objective_trace.size(); ++e) {
    CHECK(result.objective_trace[e] <=
          result.objective_trace[e - 1] + 1e-6);
  }
  // The returned objective is the best of the trace.
  for (double obj : result.objective_trace) {
    CHECK(result.objective_value <= obj + 1e-12);
  }
  CHECK(objective(result.w, data, result.lambda_used, cfg.measure) <=
        objective(std::vector<double>(6, 0.0), data, result.lambda_used,
                  cfg.measure) +
            1e-9);
}

TEST_CASE("different seeds converge to the same objective value") {
  const auto data = separable_queries(40, 4, 5, 23);
  BatchConfig cfg;
  cfg.lambda = 0.1;
  cfg.measure = RankingMeasure::map();
  cfg.epochs = 80;
  cfg.ball_radius = 5.0;
  cfg.seed = 1;
  const FitResult a = fit(data, cfg);
  cfg.seed = 2;
  const FitResult b = fit(data, cfg);
  CHECK(std::abs(a.objective_value - b.objective_value) < 1e-3);
}

TEST_CASE("config validation") {
  const auto data = separable_queries(5, 3, 4, 29);
  BatchConfig cfg;
  cfg.epochs = 0;
  CHECK_THROWS_AS(fit(data, cfg), InvalidArgumentError);
  cfg.epochs = 1;
  cfg.ball_radius = 0.0;
  CHECK_THROWS_AS(fit(data, cfg), InvalidArgumentError);
  cfg.ball_radius = 1.0;
  CHECK_THROWS_AS(fit({}, cfg), InvalidArgumentError);
}
