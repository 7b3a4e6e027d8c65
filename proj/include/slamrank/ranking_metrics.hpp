#ifndef SLAMRANK_RANKING_METRICS_HPP_
#define SLAMRANK_RANKING_METRICS_HPP_

#include <vector>

#include "slamrank/types.hpp"

// NDCG, NDCG@k and MAP computed from score and relevance vectors.
//
// Conventions used throughout:
//  - exact score ties are broken by ascending document index;
//  - a query whose ideal gain is zero (all-zero relevance, or no relevant
//    document for MAP) scores 1.0, i.e. zero induced loss;
//  - NDCG@k indexes documents in relevance-sorted order, with equal-grade
//    documents ordered by descending score. The entry point canonicalizes
//    internally, so callers may pass documents in any order.

namespace slamrank {

// Gain of one relevance grade: 2^r - 1.
double gain(int grade);

// Positional discount for a 1-based rank: 1 / log2(rank + 1).
double discount(int position);

// Ranking induced by a score vector (descending scores, ties by index).
Permutation permutation_from_scores(const Scores& s);

// Best achievable DCG over all rankings, optionally truncated to the top k.
double ideal_dcg(const Relevance& rel);
double ideal_dcg(const Relevance& rel, int k);

double ndcg(const Scores& s, const Relevance& rel);
double ndcg_at_k(const Scores& s, const Relevance& rel, int k);
double map_score(const Scores& s, const Relevance& rel);

// Metric value for an explicit ranking, used to evaluate alternative tie
// resolutions that permutation_from_scores would not pick.
double ndcg_for_permutation(const Permutation& pi, const Relevance& rel);
double map_for_permutation(const Permutation& pi, const Relevance& rel);

// Dispatch on a RankingMeasure; NDCG@k cutoffs are clamped to m.
double measure_value(const Scores& s, const Relevance& rel,
                     const RankingMeasure& measure);

// Induced loss 1 - measure_value. Exactly 0.0 for correctly sorted input.
double measure_loss(const Scores& s, const Relevance& rel,
                    const RankingMeasure& measure);

// Document indices sorted by nonincreasing grade; equal grades keep input
// order. The canonical order weight vectors are defined in.
std::vector<int> canonical_order(const Relevance& rel);

// As above but equal grades are ordered by descending score (then index).
std::vector<int> canonical_order(const Relevance& rel, const Scores& s);

}  // namespace slamrank

#endif  // SLAMRANK_RANKING_METRICS_HPP_
