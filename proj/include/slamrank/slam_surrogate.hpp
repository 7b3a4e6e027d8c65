#ifndef SLAMRANK_SLAM_SURROGATE_HPP_
#define SLAMRANK_SLAM_SURROGATE_HPP_

#include <span>
#include <vector>

#include "slamrank/types.hpp"

// The SLAM family of listwise large-margin surrogates.
//
//   phi_v(s, R) = sum_i v_i * max(0, max_j I(R_i > R_j) (delta + s_j - s_i))
//
// A nonnegative weight vector v selects the family member; the three
// constructions below make phi_v an upper bound on the MAP, NDCG and
// NDCG@k induced losses respectively.

namespace slamrank {

struct SlamWeights {
  std::vector<double> v;   // aligned with original document indices
  RankingMeasure measure;  // which measure produced it
  bool degenerate = false; // all-zero weights (no orderable pair)

  double sum() const;
  int size() const { return static_cast<int>(v.size()); }
};

// v_i = 1/r - i/(r(m-r+i)) over the r relevant documents in relevance-sorted
// order, zero elsewhere. Requires binary relevance; r = 0 or r = m yields
// all-zero weights flagged degenerate.
SlamWeights weights_map(const Relevance& rel);

// v_i = (G(R_i) - G(R_m)) (D(i) - D(m)) / Z(R) in relevance-sorted order.
// Constant relevance yields all-zero weights flagged degenerate.
SlamWeights weights_ndcg(const Relevance& rel);

// v_i = G(R_i) D(i) / Z_k(R) for the top k positions in relevance-sorted
// order, zero elsewhere. Sums to exactly 1 when Z_k > 0.
SlamWeights weights_ndcg_at_k(const Relevance& rel, int k);

// Dispatch on measure kind; NDCG@k cutoffs are clamped to m.
SlamWeights weights_for(const RankingMeasure& measure, const Relevance& rel);

double slam_loss(const Scores& s, const Relevance& rel, const SlamWeights& v,
                 double delta = 1.0);

// Subgradient of slam_loss with respect to the scores: sum_i v_i a_i with
// a_i = e_k - e_i for the smallest maximizing competitor k, or zero when the
// inner max is <= 0 (exact comparison). Satisfies ||g||_1 <= 2 sum(v).
Scores slam_subgradient_scores(const Scores& s, const Relevance& rel,
                               const SlamWeights& v, double delta = 1.0);

// Chain rule through s = X w: returns X^T * slam_subgradient_scores.
std::vector<double> slam_subgradient_params(const QueryInstance& q,
                                            std::span<const double> w,
                                            const SlamWeights& v,
                                            double delta = 1.0);

// Largest ratio between two positive weight entries (>= 1). Throws
// DegenerateWeightsError when no entry is positive.
double v_max_ratio(const SlamWeights& v);

}  // namespace slamrank

#endif  // SLAMRANK_SLAM_SURROGATE_HPP_
