#include <cmath>
#include <random>

#include "doctest.h"
#include "slamrank/ranking_metrics.hpp"
#include "test_util.hpp"

using namespace slamrank;

TEST_CASE("gain evaluates 2^r - 1") {
  CHECK(gain(0) == 0.0);
  CHECK(gain(2) == 3.0);
  CHECK(gain(4) == 15.0);
  CHECK_THROWS_AS(gain(-1), InvalidArgumentError);
}

TEST_CASE("discount is the inverse binary log of rank + 1") {
  CHECK(discount(1) == 1.0);
  CHECK(discount(3) == 0.5);
  CHECK(discount(2) == doctest::Approx(0.6309297).epsilon(1e-6));
  CHECK_THROWS_AS(discount(0), InvalidArgumentError);
  CHECK_THROWS_AS(discount(-2), InvalidArgumentError);
}

TEST_CASE("permutation_from_scores sorts descending with index tie-break") {
  CHECK(permutation_from_scores({3, 2, 1}).order == std::vector<int>{0, 1, 2});
  CHECK(permutation_from_scores({1, 2, 3}).order == std::vector<int>{2, 1, 0});
  CHECK(permutation_from_scores({2, 2, 5}).order == std::vector<int>{2, 0, 1});
  CHECK_THROWS_AS(permutation_from_scores({}), InvalidArgumentError);
  CHECK_THROWS_AS(permutation_from_scores({1.0, std::nan("")}),
                  InvalidArgumentError);
}

TEST_CASE("permutation order and inverse stay consistent") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Permutation pi =
        permutation_from_scores(test::random_scores(rng, 1 + trial % 9));
    CHECK(pi.consistent());
  }
}

TEST_CASE("induced permutation is invariant to positive rescaling") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Scores s = test::random_scores(rng, 2 + trial % 7);
    const Permutation base = permutation_from_scores(s);
    for (double c : {0.5, 2.0, 977.25}) {
      Scores scaled(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) scaled[i] = c * s[i];
      CHECK(permutation_from_scores(scaled).order == base.order);
    }
  }
}

TEST_CASE("ideal_dcg matches hand-evaluated sums") {
  CHECK(ideal_dcg({1, 0}) == doctest::Approx(1.0));
  CHECK(ideal_dcg({0, 0, 0}) == 0.0);
  CHECK(ideal_dcg({2, 1}) == doctest::Approx(3.6309297).epsilon(1e-6));
  CHECK(ideal_dcg({2, 1}, 1) == doctest::Approx(3.0));
  CHECK_THROWS_AS(ideal_dcg({1, 0}, 0), InvalidArgumentError);
  CHECK_THROWS_AS(ideal_dcg({1, 0}, 3), InvalidArgumentError);
}

TEST_CASE("ndcg examples") {
  CHECK(ndcg({2, 1}, {1, 0}) == 1.0);  // exactly: perfect order
  CHECK(ndcg({0, 1}, {1, 0}) == doctest::Approx(0.6309297).epsilon(1e-6));
  CHECK(ndcg({5, 1}, {0, 0}) == 1.0);  // all-zero relevance convention
  CHECK_THROWS_AS(ndcg({1, 2}, {1, 0, 0}), DimensionError);
}

TEST_CASE("ndcg@k examples") {
  // k = m reproduces full ndcg on relevance-sorted input.
  CHECK(ndcg_at_k({1, 3, 2}, {2, 1, 0}, 3) ==
        doctest::Approx(ndcg({1, 3, 2}, {2, 1, 0})).epsilon(1e-12));
  CHECK(ndcg_at_k({2, 1, 0}, {1, 1, 0}, 2) == 1.0);
  CHECK(ndcg_at_k({0, 1, 2}, {1, 0, 0}, 1) == doctest::Approx(0.5));
  CHECK(ndcg_at_k({5, 1}, {0, 0}, 2) == 1.0);  // Z_k = 0 convention
  CHECK_THROWS_AS(ndcg_at_k({1, 2}, {1, 0}, 3), InvalidArgumentError);
  CHECK_THROWS_AS(ndcg_at_k({1, 2}, {1, 0}, 0), InvalidArgumentError);
}

TEST_CASE("ndcg@k places equal-grade documents by score before truncating") {
  // Both documents are relevant; whichever outscores the other counts as
  // the top document, so any order of equals is perfect.
  CHECK(ndcg_at_k({0, 5}, {1, 1}, 1) == 1.0);
  CHECK(ndcg_at_k({5, 0}, {1, 1}, 1) == 1.0);
}

TEST_CASE("map_score examples") {
  CHECK(map_score({3, 2, 1}, {1, 1, 0}) == 1.0);
  CHECK(map_score({3, 2, 1}, {1, 0, 1}) ==
        doctest::Approx(0.8333333).epsilon(1e-6));
  CHECK(map_score({1, 2, 3}, {1, 1, 0}) ==
        doctest::Approx(0.5833333).epsilon(1e-6));
  CHECK(map_score({1, 2}, {0, 0}) == 1.0);  // r = 0 convention
  CHECK_THROWS_AS(map_score({1, 2}, {2, 0}), InvalidArgumentError);
}

TEST_CASE("metrics are invariant under joint document permutation") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 2 + trial % 7;
    const Scores s = test::random_scores(rng, m);
    const Relevance rel_graded = test::random_relevance(rng, m, 4);
    const Relevance rel_binary = test::random_relevance(rng, m, 1);
    const std::vector<int> p = test::random_permutation(rng, m);
    const Scores ps = test::apply_permutation(p, s);
    CHECK(ndcg(ps, test::apply_permutation(p, rel_graded)) ==
          doctest::Approx(ndcg(s, rel_graded)).epsilon(1e-12));
    CHECK(map_score(ps, test::apply_permutation(p, rel_binary)) ==
          doctest::Approx(map_score(s, rel_binary)).epsilon(1e-12));
  }
}

TEST_CASE("metrics live in [0, 1] and reward perfect orderings exactly") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 1 + trial % 8;
    const Scores s = test::random_scores(rng, m);
    const Relevance rel = test::random_relevance(rng, m, 4);
    const double value = ndcg(s, rel);
    CHECK(value >= 0.0);
    CHECK(value <= 1.0);

    // Score the documents by grade: sorted order, NDCG exactly one.
    Scores by_grade(m);
    for (int i = 0; i < m; ++i) by_grade[i] = rel[i];
    CHECK(ndcg(by_grade, rel) == 1.0);

    const Relevance binary = test::random_relevance(rng, m, 1);
    const double map_value = map_score(s, binary);
    CHECK(map_value >= 0.0);
    CHECK(map_value <= 1.0);

    const int k = 1 + static_cast<int>(rng() % m);
    const double at_k = ndcg_at_k(s, rel, k);
    CHECK(at_k >= 0.0);
    CHECK(at_k <= 1.0);
  }
}

TEST_CASE("ndcg@k at k = m agrees with ndcg on sorted relevance") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + trial % 8;
    Relevance rel = test::random_relevance(rng, m, 4);
    std::sort(rel.begin(), rel.end(), std::greater<int>());
    const Scores s = test::random_scores(rng, m);
    CHECK(ndcg_at_k(s, rel, m) == doctest::Approx(ndcg(s, rel)).epsilon(1e-12));
  }
}

TEST_CASE("measure_value dispatches and clamps the cutoff") {
  const Scores s{3, 2, 1};
  const Relevance rel{1, 1, 0};
  CHECK(measure_value(s, rel, RankingMeasure::ndcg()) == 1.0);
  CHECK(measure_value(s, rel, RankingMeasure::map()) == 1.0);
  CHECK(measure_value(s, rel, RankingMeasure::ndcg_at(5)) == 1.0);  // k -> 3
  CHECK(measure_loss(s, rel, RankingMeasure::ndcg()) == 0.0);
}

TEST_CASE("measure tags round-trip") {
  CHECK(RankingMeasure::from_tag("ndcg") == RankingMeasure::ndcg());
  CHECK(RankingMeasure::from_tag("map") == RankingMeasure::map());
  CHECK(RankingMeasure::from_tag("ndcg@7") == RankingMeasure::ndcg_at(7));
  CHECK(RankingMeasure::ndcg_at(7).tag() == "ndcg@7");
  CHECK_THROWS_AS(RankingMeasure::from_tag("mrr"), InvalidArgumentError);
  CHECK_THROWS_AS(RankingMeasure::from_tag("ndcg@0"), InvalidArgumentError);
}
