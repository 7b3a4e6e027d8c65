#ifndef SLAMRANK_TYPES_HPP_
#define SLAMRANK_TYPES_HPP_

#include <span>
#include <string>
#include <vector>

#include "slamrank/errors.hpp"

namespace slamrank {

// Per-document scores for one query; higher score means ranked earlier.
using Scores = std::vector<double>;

// Per-document integer relevance grades (0 = irrelevant).
using Relevance = std::vector<int>;

inline constexpr int kDefaultMaxGrade = 4;

// Hard cap so gains 2^r - 1 stay exactly representable in a double.
inline constexpr int kGradeLimit = 62;

void validate_relevance(const Relevance& rel, int max_grade = kGradeLimit);
void validate_binary_relevance(const Relevance& rel);

// Which ranking gain a surrogate or evaluator targets. NdcgAtK carries the
// cutoff; the other kinds ignore it.
struct RankingMeasure {
  enum class Kind { Ndcg, NdcgAtK, Map };

  Kind kind = Kind::Ndcg;
  int cutoff = 0;

  static RankingMeasure ndcg() { return {Kind::Ndcg, 0}; }
  static RankingMeasure map() { return {Kind::Map, 0}; }
  static RankingMeasure ndcg_at(int k);

  // Cutoff to use on a query with m documents (k is clamped to m).
  int effective_cutoff(int m) const;

  std::string tag() const;                               // "ndcg", "map", "ndcg@3"
  static RankingMeasure from_tag(const std::string& s);  // inverse of tag()

  bool operator==(const RankingMeasure&) const = default;
};

// A full ranking of m documents. order[p] is the document placed at rank
// p+1; inverse[doc] is the zero-based rank of that document.
struct Permutation {
  std::vector<int> order;
  std::vector<int> inverse;

  int size() const { return static_cast<int>(order.size()); }
  bool consistent() const;

  static Permutation from_order(std::vector<int> order);
};

// One query: an m x d feature matrix (row per document) plus grades.
struct QueryInstance {
  std::string qid;
  int num_docs = 0;
  int num_features = 0;
  std::vector<double> features;  // row-major, num_docs * num_features
  Relevance relevance;

  std::span<const double> row(int i) const {
    return {features.data() + static_cast<std::size_t>(i) * num_features,
            static_cast<std::size_t>(num_features)};
  }

  Scores scores(std::span<const double> w) const;  // X w
  double max_row_norm() const;

  // m < 2 or constant relevance: no ordering can be wrong, trainers skip it.
  bool degenerate() const;

  void validate() const;
};

double l2_norm(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace slamrank

#endif  // SLAMRANK_TYPES_HPP_
