#include "slamrank/slam_surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slamrank/ranking_metrics.hpp"

namespace slamrank {

namespace {

void check_aligned(const Scores& s, const Relevance& rel,
                   const SlamWeights& v) {
  if (s.size() != rel.size() || v.v.size() != rel.size()) {
    throw DimensionError("scores, relevance and weights must share length");
  }
}

SlamWeights zero_weights(std::size_t m, RankingMeasure measure) {
  SlamWeights w;
  w.v.assign(m, 0.0);
  w.measure = measure;
  w.degenerate = true;
  return w;
}

}  // namespace

double SlamWeights::sum() const {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc;
}

SlamWeights weights_map(const Relevance& rel) {
  validate_binary_relevance(rel);
  const int m = static_cast<int>(rel.size());
  const int r = static_cast<int>(std::count(rel.begin(), rel.end(), 1));
  if (r == 0 || r == m) {
    return zero_weights(rel.size(), RankingMeasure::map());
  }
  const std::vector<int> canon = canonical_order(rel);
  SlamWeights w;
  w.v.assign(rel.size(), 0.0);
  w.measure = RankingMeasure::map();
  for (int i = 1; i <= r; ++i) {
    const double value = 1.0 / r - static_cast<double>(i) /
                                       (static_cast<double>(r) * (m - r + i));
    w.v[canon[i - 1]] = value;
  }
  return w;
}

SlamWeights weights_ndcg(const Relevance& rel) {
  validate_relevance(rel);
  const auto [lo, hi] = std::minmax_element(rel.begin(), rel.end());
  if (*lo == *hi) {
    return zero_weights(rel.size(), RankingMeasure::ndcg());
  }
  const int m = static_cast<int>(rel.size());
  const double z = ideal_dcg(rel);
  const std::vector<int> canon = canonical_order(rel);
  const double gain_min = gain(*lo);
  const double disc_last = discount(m);
  SlamWeights w;
  w.v.assign(rel.size(), 0.0);
  w.measure = RankingMeasure::ndcg();
  for (int i = 1; i <= m; ++i) {
    const int doc = canon[i - 1];
    w.v[doc] = (gain(rel[doc]) - gain_min) * (discount(i) - disc_last) / z;
  }
  return w;
}

SlamWeights weights_ndcg_at_k(const Relevance& rel, int k) {
  validate_relevance(rel);
  const int m = static_cast<int>(rel.size());
  if (k < 1 || k > m) {
    throw InvalidArgumentError("invalid cutoff: k must be in [1, m]");
  }
  const std::vector<int> canon = canonical_order(rel);
  double z_k = 0.0;
  for (int i = 1; i <= k; ++i) {
    z_k += gain(rel[canon[i - 1]]) * discount(i);
  }
  if (z_k == 0.0) {
    return zero_weights(rel.size(), RankingMeasure::ndcg_at(k));
  }
  SlamWeights w;
  w.v.assign(rel.size(), 0.0);
  w.measure = RankingMeasure::ndcg_at(k);
  for (int i = 1; i <= k; ++i) {
    const int doc = canon[i - 1];
    w.v[doc] = gain(rel[doc]) * discount(i) / z_k;
  }
  return w;
}

SlamWeights weights_for(const RankingMeasure& measure, const Relevance& rel) {
  switch (measure.kind) {
    case RankingMeasure::Kind::Ndcg:
      return weights_ndcg(rel);
    case RankingMeasure::Kind::Map:
      return weights_map(rel);
    case RankingMeasure::Kind::NdcgAtK:
      return weights_ndcg_at_k(
          rel, measure.effective_cutoff(static_cast<int>(rel.size())));
  }
  throw InvalidArgumentError("unknown measure kind");
}

double slam_loss(const Scores& s, const Relevance& rel, const SlamWeights& v,
                 double delta) {
  check_aligned(s, rel, v);
  if (delta <= 0.0) {
    throw InvalidArgumentError("margin constant delta must be positive");
  }
  const int m = static_cast<int>(s.size());
  double loss = 0.0;
  for (int i = 0; i < m; ++i) {
    if (v.v[i] == 0.0) continue;
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
      if (rel[i] > rel[j] && s[j] > best) best = s[j];
    }
    if (best == -std::numeric_limits<double>::infinity()) continue;
    const double slack = delta + best - s[i];
    if (slack > 0.0) loss += v.v[i] * slack;
  }
  return loss;
}

Scores slam_subgradient_scores(const Scores& s, const Relevance& rel,
                               const SlamWeights& v, double delta) {
  check_aligned(s, rel, v);
  const int m = static_cast<int>(s.size());
  Scores g(m, 0.0);
  for (int i = 0; i < m; ++i) {
    if (v.v[i] == 0.0) continue;
    // Smallest index among maximizing less-relevant competitors.
    int k = -1;
    for (int j = 0; j < m; ++j) {
      if (rel[i] > rel[j] && (k == -1 || s[j] > s[k])) k = j;
    }
    if (k == -1) continue;
    if (delta + s[k] - s[i] > 0.0) {
      g[k] += v.v[i];
      g[i] -= v.v[i];
    }
  }
  return g;
}

std::vector<double> slam_subgradient_params(const QueryInstance& q,
                                            std::span<const double> w,
                                            const SlamWeights& v,
                                            double delta) {
  const Scores s = q.scores(w);
  const Scores gs = slam_subgradient_scores(s, q.relevance, v, delta);
  std::vector<double> z(q.num_features, 0.0);
  for (int i = 0; i < q.num_docs; ++i) {
    if (gs[i] == 0.0) continue;
    const auto xi = q.row(i);
    for (int f = 0; f < q.num_features; ++f) {
      z[f] += gs[i] * xi[f];
    }
  }
  return z;
}

double v_max_ratio(const SlamWeights& v) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double x : v.v) {
    if (x > 0.0) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  if (hi == 0.0) {
    throw DegenerateWeightsError("weight vector has no positive entry");
  }
  return hi / lo;
}

}  // namespace slamrank
