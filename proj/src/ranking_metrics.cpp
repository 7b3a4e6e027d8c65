#include "slamrank/ranking_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace slamrank {

namespace {

void check_lengths(const Scores& s, const Relevance& rel) {
  if (s.size() != rel.size()) {
    throw DimensionError("score length " + std::to_string(s.size()) +
                         " does not match relevance length " +
                         std::to_string(rel.size()));
  }
}

void check_scores_finite(const Scores& s) {
  for (double x : s) {
    if (!std::isfinite(x)) {
      throw InvalidArgumentError("score vector has a non-finite entry");
    }
  }
}

}  // namespace

double gain(int grade) {
  if (grade < 0) {
    throw InvalidArgumentError("invalid grade: must be nonnegative");
  }
  if (grade > kGradeLimit) {
    throw InvalidArgumentError("invalid grade: exceeds representable limit");
  }
  return std::ldexp(1.0, grade) - 1.0;  // 2^r - 1, exact
}

double discount(int position) {
  if (position < 1) {
    throw InvalidArgumentError("invalid rank: positions are 1-based");
  }
  return 1.0 / std::log2(static_cast<double>(position) + 1.0);
}

Permutation permutation_from_scores(const Scores& s) {
  if (s.empty()) {
    throw InvalidArgumentError("score vector must be nonempty");
  }
  check_scores_finite(s);
  std::vector<int> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  // Stable sort keeps ascending index order among exact ties.
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return s[a] > s[b]; });
  return Permutation::from_order(std::move(order));
}

double ideal_dcg(const Relevance& rel) {
  return ideal_dcg(rel, static_cast<int>(rel.size()));
}

double ideal_dcg(const Relevance& rel, int k) {
  validate_relevance(rel);
  const int m = static_cast<int>(rel.size());
  if (k < 1 || k > m) {
    throw InvalidArgumentError("invalid cutoff: k must be in [1, m]");
  }
  Relevance sorted = rel;
  std::sort(sorted.begin(), sorted.end(), std::greater<int>());
  double z = 0.0;
  for (int i = 0; i < k; ++i) {
    z += gain(sorted[i]) * discount(i + 1);
  }
  return z;
}

double ndcg_for_permutation(const Permutation& pi, const Relevance& rel) {
  if (pi.size() != static_cast<int>(rel.size())) {
    throw DimensionError("permutation size does not match relevance length");
  }
  const double z = ideal_dcg(rel);
  if (z == 0.0) return 1.0;
  // Summing in rank order makes a correctly sorted ranking reproduce the
  // ideal sum term by term, so the ratio is exactly 1.0.
  double dcg = 0.0;
  for (int p = 0; p < pi.size(); ++p) {
    dcg += gain(rel[pi.order[p]]) * discount(p + 1);
  }
  return dcg / z;
}

double map_for_permutation(const Permutation& pi, const Relevance& rel) {
  if (pi.size() != static_cast<int>(rel.size())) {
    throw DimensionError("permutation size does not match relevance length");
  }
  validate_binary_relevance(rel);
  const int r =
      static_cast<int>(std::count(rel.begin(), rel.end(), 1));
  if (r == 0) return 1.0;
  double sum = 0.0;
  int hits = 0;
  for (int p = 0; p < pi.size(); ++p) {
    if (rel[pi.order[p]] == 1) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(p + 1);
    }
  }
  return sum / static_cast<double>(r);
}

double ndcg(const Scores& s, const Relevance& rel) {
  check_lengths(s, rel);
  return ndcg_for_permutation(permutation_from_scores(s), rel);
}

double ndcg_at_k(const Scores& s, const Relevance& rel, int k) {
  check_lengths(s, rel);
  validate_relevance(rel);
  const int m = static_cast<int>(rel.size());
  if (k < 1 || k > m) {
    throw InvalidArgumentError("invalid cutoff: k must be in [1, m]");
  }
  const std::vector<int> canon = canonical_order(rel, s);
  double z = 0.0;
  for (int i = 0; i < k; ++i) {
    z += gain(rel[canon[i]]) * discount(i + 1);
  }
  if (z == 0.0) return 1.0;
  const Permutation pi = permutation_from_scores(s);
  double value = 0.0;
  for (int i = 0; i < k; ++i) {
    const int doc = canon[i];
    value += gain(rel[doc]) * discount(pi.inverse[doc] + 1);
  }
  return value / z;
}

double map_score(const Scores& s, const Relevance& rel) {
  check_lengths(s, rel);
  return map_for_permutation(permutation_from_scores(s), rel);
}

double measure_value(const Scores& s, const Relevance& rel,
                     const RankingMeasure& measure) {
  switch (measure.kind) {
    case RankingMeasure::Kind::Ndcg:
      return ndcg(s, rel);
    case RankingMeasure::Kind::Map:
      return map_score(s, rel);
    case RankingMeasure::Kind::NdcgAtK:
      return ndcg_at_k(s, rel,
                       measure.effective_cutoff(static_cast<int>(rel.size())));
  }
  return 0.0;
}

double measure_loss(const Scores& s, const Relevance& rel,
                    const RankingMeasure& measure) {
  return 1.0 - measure_value(s, rel, measure);
}

std::vector<int> canonical_order(const Relevance& rel) {
  std::vector<int> order(rel.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return rel[a] > rel[b]; });
  return order;
}

std::vector<int> canonical_order(const Relevance& rel, const Scores& s) {
  if (s.size() != rel.size()) {
    throw DimensionError("score length does not match relevance length");
  }
  std::vector<int> order(rel.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (rel[a] != rel[b]) return rel[a] > rel[b];
    return s[a] > s[b];
  });
  return order;
}

}  // namespace slamrank
