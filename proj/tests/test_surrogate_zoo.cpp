#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "slamrank/surrogate_zoo.hpp"
#include "test_util.hpp"

using namespace slamrank;

namespace {

double l1(const Scores& v) {
  double acc = 0.0;
  for (double x : v) acc += std::abs(x);
  return acc;
}

Relevance distinct_grades(std::mt19937_64& rng, int m) {
  Relevance rel(m);
  std::iota(rel.begin(), rel.end(), 0);
  std::shuffle(rel.begin(), rel.end(), rng);
  return rel;
}

}  // namespace

TEST_CASE("ranksvm loss and gradient") {
  CHECK(ranksvm_loss({2, 0}, {1, 0}) == 0.0);
  CHECK(ranksvm_grad({2, 0}, {1, 0}) == Scores{0.0, 0.0});
  CHECK(ranksvm_loss({0, 1}, {1, 0}) == doctest::Approx(2.0));
  CHECK(ranksvm_grad({0, 1}, {1, 0}) == Scores{-1.0, 1.0});
  CHECK_THROWS_AS(ranksvm_loss({1, 2}, {2, 0}), InvalidArgumentError);

  // One irrelevant document outscoring every relevant one: 2(m-1).
  for (int m : {3, 6, 10}) {
    Relevance rel(m, 1);
    rel[m - 1] = 0;
    Scores s(m);
    for (int i = 0; i < m; ++i) s[i] = i;  // ascending: reversal
    CHECK(l1(ranksvm_grad(s, rel)) == doctest::Approx(2.0 * (m - 1)));
  }
}

TEST_CASE("listnet gradient vanishes when the distributions match") {
  const Relevance rel{2, 1, 0};
  const Scores s{2.0, 1.0, 0.0};  // softmax(s) == softmax(grades) exactly
  const Scores g = listnet_grad(s, rel);
  for (double x : g) CHECK(x == 0.0);
}

TEST_CASE("listnet gradient l1 norm is bounded by two") {
  std::mt19937_64 rng(89);
  for (int trial = 0; trial < 500; ++trial) {
    const int m = 2 + trial % 8;
    const Relevance rel = test::random_relevance(rng, m, 4);
    const Scores s = test::random_scores(rng, m, 3.0);
    const Scores g = listnet_grad(s, rel);
    CHECK(l1(g) <= 2.0 + 1e-12);
  }
}

TEST_CASE("listnet worked m=2 example") {
  const Relevance rel{1, 0};
  const Scores s{0.0, 0.0};
  const Scores g = listnet_grad(s, rel);
  const double p1 = std::exp(1.0) / (std::exp(1.0) + 1.0);
  CHECK(g[0] == doctest::Approx(0.5 - p1).epsilon(1e-12));
  CHECK(g[1] == doctest::Approx(0.5 - (1.0 - p1)).epsilon(1e-12));
}

TEST_CASE("listnet gradient matches central finite differences") {
  std::mt19937_64 rng(97);
  const double h = 1e-6;
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 2 + trial % 6;
    const Relevance rel = test::random_relevance(rng, m, 4);
    Scores s = test::random_scores(rng, m, 2.0);
    const Scores g = listnet_grad(s, rel);
    for (int i = 0; i < m; ++i) {
      const double keep = s[i];
      s[i] = keep + h;
      const double up = listnet_loss(s, rel);
      s[i] = keep - h;
      const double down = listnet_loss(s, rel);
      s[i] = keep;
      CHECK((up - down) / (2 * h) ==
            doctest::Approx(g[i]).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("struct margin basics") {
  // Perfectly sorted with huge gaps: nothing beats the reference ranking.
  const Relevance rel{2, 1, 0};
  CHECK(struct_margin_loss({100.0, 50.0, 0.0}, rel) == 0.0);
  CHECK(struct_margin_grad({100.0, 50.0, 0.0}, rel) ==
        Scores{0.0, 0.0, 0.0});

  // m=2 reversal: ranks swap by one position each.
  const Scores g = struct_margin_grad({0.0, 10.0}, {1, 0});
  CHECK(g[0] == doctest::Approx(-1.0));
  CHECK(g[1] == doctest::Approx(1.0));
  CHECK(l1(g) == doctest::Approx(2.0));

  CHECK_THROWS_AS(struct_margin_loss({1, 2}, {1, 1}), InvalidArgumentError);
  Relevance big(9);
  std::iota(big.begin(), big.end(), 0);
  CHECK_THROWS_AS(struct_margin_loss(Scores(9, 0.0), big), SizeError);
}

TEST_CASE("struct margin worst-case gradient is the signed rank reversal") {
  for (int m = 2; m <= 8; ++m) {
    Relevance rel(m);
    for (int i = 0; i < m; ++i) rel[i] = m - 1 - i;
    Scores s(m);
    for (int i = 0; i < m; ++i) s[i] = 10.0 * i;  // strong reversal
    const Scores g = struct_margin_grad(s, rel);
    double expected = 0.0;
    for (int i = 1; i <= m; ++i) expected += std::abs(2 * i - m - 1);
    CHECK(l1(g) == doctest::Approx(expected));
  }
}

TEST_CASE("zoo losses are midpoint convex") {
  std::mt19937_64 rng(101);
  const SurrogateKind kinds[] = {SurrogateKind::SlamNdcg,
                                 SurrogateKind::SlamMap, SurrogateKind::RankSvm,
                                 SurrogateKind::ListNet,
                                 SurrogateKind::StructMargin};
  for (SurrogateKind kind : kinds) {
    for (int trial = 0; trial < 200; ++trial) {
      const int m = 2 + trial % 5;
      Relevance rel;
      if (kind == SurrogateKind::StructMargin) {
        rel = distinct_grades(rng, m);
      } else if (kind == SurrogateKind::SlamMap ||
                 kind == SurrogateKind::RankSvm) {
        rel = test::random_relevance(rng, m, 1);
      } else {
        rel = test::random_relevance(rng, m, 4);
      }
      const Scores a = test::random_scores(rng, m, 2.0);
      const Scores b = test::random_scores(rng, m, 2.0);
      Scores mid(m);
      for (int i = 0; i < m; ++i) mid[i] = 0.5 * (a[i] + b[i]);
      CHECK(surrogate_loss(kind, mid, rel) <=
            0.5 * (surrogate_loss(kind, a, rel) +
                   surrogate_loss(kind, b, rel)) +
                1e-9);
    }
  }
}

TEST_CASE("zoo gradients satisfy the subgradient inequality") {
  std::mt19937_64 rng(103);
  const SurrogateKind kinds[] = {SurrogateKind::SlamNdcg,
                                 SurrogateKind::SlamMap, SurrogateKind::RankSvm,
                                 SurrogateKind::ListNet,
                                 SurrogateKind::StructMargin};
  for (SurrogateKind kind : kinds) {
    for (int trial = 0; trial < 200; ++trial) {
      const int m = 2 + trial % 5;
      Relevance rel;
      if (kind == SurrogateKind::StructMargin) {
        rel = distinct_grades(rng, m);
      } else if (kind == SurrogateKind::SlamMap ||
                 kind == SurrogateKind::RankSvm) {
        rel = test::random_relevance(rng, m, 1);
      } else {
        rel = test::random_relevance(rng, m, 4);
      }
      const Scores s = test::random_scores(rng, m, 2.0);
      const Scores s2 = test::random_scores(rng, m, 2.0);
      const Scores g = surrogate_grad(kind, s, rel);
      double linear = 0.0;
      for (int i = 0; i < m; ++i) linear += g[i] * (s2[i] - s[i]);
      CHECK(surrogate_loss(kind, s2, rel) >=
            surrogate_loss(kind, s, rel) + linear - 1e-9);
    }
  }
}

TEST_CASE("lipschitz profiles classify the growth rates") {
  const std::vector<int> wide{5, 10, 20, 40};
  const std::vector<int> narrow{2, 3, 4, 5, 6, 7, 8};

  const LipschitzProfile slam_ndcg =
      lipschitz_profile(SurrogateKind::SlamNdcg, wide, 64, 1);
  for (const auto& rec : slam_ndcg.records) CHECK(rec.sup_l1 <= 2.0 + 1e-12);
  CHECK(slam_ndcg.growth_exponent >= -0.1);
  CHECK(slam_ndcg.growth_exponent <= 0.1);

  const LipschitzProfile slam_map =
      lipschitz_profile(SurrogateKind::SlamMap, wide, 64, 2);
  for (const auto& rec : slam_map.records) CHECK(rec.sup_l1 <= 2.0 + 1e-12);

  const LipschitzProfile listnet =
      lipschitz_profile(SurrogateKind::ListNet, wide, 64, 3);
  for (const auto& rec : listnet.records) CHECK(rec.sup_l1 <= 2.0 + 1e-12);
  CHECK(listnet.growth_exponent >= -0.1);
  CHECK(listnet.growth_exponent <= 0.1);

  const LipschitzProfile ranksvm =
      lipschitz_profile(SurrogateKind::RankSvm, wide, 64, 4);
  for (const auto& rec : ranksvm.records) {
    CHECK(rec.sup_l1 == doctest::Approx(2.0 * (rec.m - 1)));
  }
  CHECK(ranksvm.growth_exponent >= 0.8);
  CHECK(ranksvm.growth_exponent <= 1.2);

  const LipschitzProfile structured =
      lipschitz_profile(SurrogateKind::StructMargin, narrow, 16, 5);
  CHECK(structured.growth_exponent >= 1.6);
  CHECK(structured.growth_exponent <= 2.4);

  CHECK_THROWS_AS(
      lipschitz_profile(SurrogateKind::StructMargin, std::vector<int>{9}, 4, 1),
      SizeError);
}

TEST_CASE("profile CSV carries a header and one row per m") {
  const std::vector<int> grid{4, 8};
  const LipschitzProfile profile =
      lipschitz_profile(SurrogateKind::RankSvm, grid, 8, 6);
  const std::string csv = profile.to_csv();
  CHECK(csv.rfind("kind,m,sup_l1,trials\n", 0) == 0);
  CHECK(csv.find("ranksvm,4,") != std::string::npos);
  CHECK(csv.find("ranksvm,8,") != std::string::npos);
}

TEST_CASE("surrogate tags round-trip") {
  for (SurrogateKind kind :
       {SurrogateKind::SlamNdcg, SurrogateKind::SlamMap, SurrogateKind::RankSvm,
        SurrogateKind::ListNet, SurrogateKind::StructMargin}) {
    CHECK(surrogate_kind_from_tag(surrogate_tag(kind)) == kind);
  }
  CHECK_THROWS_AS(surrogate_kind_from_tag("lambdamart"), InvalidArgumentError);
}
