#ifndef SLAMRANK_SURROGATE_ZOO_HPP_
#define SLAMRANK_SURROGATE_ZOO_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "slamrank/types.hpp"

// Reference implementations of comparison surrogates plus an empirical
// l1-Lipschitz profiler for the score gradient. The profiler classifies
// surrogates by how the worst observed ||grad||_1 grows with m: flat for
// the SLAM members and ListNet, linear for RankSVM, quadratic for the
// structured large-margin loss.

namespace slamrank {

enum class SurrogateKind { SlamNdcg, SlamMap, RankSvm, ListNet, StructMargin };

std::string surrogate_tag(SurrogateKind kind);
SurrogateKind surrogate_kind_from_tag(const std::string& tag);

// Pairwise hinge over all orderable pairs; binary relevance only.
double ranksvm_loss(const Scores& s, const Relevance& rel);
Scores ranksvm_grad(const Scores& s, const Relevance& rel);

// Listwise cross-entropy between the top-one target distribution
// softmax(R) and softmax(s). Gradient is softmax(s) - softmax(R).
double listnet_loss(const Scores& s, const Relevance& rel);
Scores listnet_grad(const Scores& s, const Relevance& rel);

// Margin-rescaled structured loss max_y(Delta(y, y_q) + s^T A(y) - s^T A(y_q))
// with negative-rank encoding A(y)_i = -rank_y(i) and Delta = NDCG-induced
// loss of y. Requires all-distinct grades; exact enumeration, m <= 8.
double struct_margin_loss(const Scores& s, const Relevance& rel);
Scores struct_margin_grad(const Scores& s, const Relevance& rel);

double surrogate_loss(SurrogateKind kind, const Scores& s,
                      const Relevance& rel);
Scores surrogate_grad(SurrogateKind kind, const Scores& s,
                      const Relevance& rel);

struct LipschitzRecord {
  int m = 0;
  double sup_l1 = 0.0;
  long long trials = 0;
};

struct LipschitzProfile {
  SurrogateKind kind;
  std::vector<LipschitzRecord> records;
  double growth_exponent = 0.0;  // least-squares slope of log sup vs log m

  std::string to_csv() const;  // kind,m,sup_l1,trials
};

// For each m: the kind's worst-case witness instance plus `trials` random
// score draws against the same relevance pattern; sup of ||grad||_1.
LipschitzProfile lipschitz_profile(SurrogateKind kind,
                                   std::span<const int> m_values,
                                   long long trials, std::uint64_t seed);

}  // namespace slamrank

#endif  // SLAMRANK_SURROGATE_ZOO_HPP_
