#include "slamrank/types.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>

namespace slamrank {

void validate_relevance(const Relevance& rel, int max_grade) {
  if (rel.empty()) {
    throw InvalidArgumentError("relevance vector must be nonempty");
  }
  for (int g : rel) {
    if (g < 0) {
      throw InvalidArgumentError("invalid grade: negative relevance level");
    }
    if (g > max_grade) {
      throw InvalidArgumentError("invalid grade: level " + std::to_string(g) +
                                 " exceeds max grade " +
                                 std::to_string(max_grade));
    }
  }
}

void validate_binary_relevance(const Relevance& rel) {
  if (rel.empty()) {
    throw InvalidArgumentError("relevance vector must be nonempty");
  }
  for (int g : rel) {
    if (g != 0 && g != 1) {
      throw InvalidArgumentError(
          "invalid relevance: binary grades required, got " +
          std::to_string(g));
    }
  }
}

RankingMeasure RankingMeasure::ndcg_at(int k) {
  if (k < 1) {
    throw InvalidArgumentError("invalid cutoff: k must be >= 1");
  }
  return {Kind::NdcgAtK, k};
}

int RankingMeasure::effective_cutoff(int m) const {
  if (kind != Kind::NdcgAtK) return m;
  return std::min(cutoff, m);
}

std::string RankingMeasure::tag() const {
  switch (kind) {
    case Kind::Ndcg:
      return "ndcg";
    case Kind::Map:
      return "map";
    case Kind::NdcgAtK:
      return "ndcg@" + std::to_string(cutoff);
  }
  return "ndcg";
}

RankingMeasure RankingMeasure::from_tag(const std::string& s) {
  if (s == "ndcg") return ndcg();
  if (s == "map") return map();
  if (s.rfind("ndcg@", 0) == 0) {
    const std::string rest = s.substr(5);
    int k = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), k);
    if (ec == std::errc() && ptr == rest.data() + rest.size() && k >= 1) {
      return ndcg_at(k);
    }
  }
  throw InvalidArgumentError("unknown measure tag: " + s);
}

bool Permutation::consistent() const {
  if (order.size() != inverse.size()) return false;
  const int m = size();
  std::vector<bool> seen(m, false);
  for (int p = 0; p < m; ++p) {
    const int doc = order[p];
    if (doc < 0 || doc >= m || seen[doc]) return false;
    seen[doc] = true;
    if (inverse[doc] != p) return false;
  }
  return true;
}

Permutation Permutation::from_order(std::vector<int> order) {
  Permutation pi;
  pi.inverse.assign(order.size(), -1);
  for (int p = 0; p < static_cast<int>(order.size()); ++p) {
    const int doc = order[p];
    if (doc < 0 || doc >= static_cast<int>(order.size()) ||
        pi.inverse[doc] != -1) {
      throw InvalidArgumentError("order is not a permutation");
    }
    pi.inverse[doc] = p;
  }
  pi.order = std::move(order);
  return pi;
}

Scores QueryInstance::scores(std::span<const double> w) const {
  if (static_cast<int>(w.size()) != num_features) {
    throw DimensionError("parameter dimension " + std::to_string(w.size()) +
                         " does not match feature dimension " +
                         std::to_string(num_features));
  }
  Scores s(num_docs, 0.0);
  for (int i = 0; i < num_docs; ++i) {
    s[i] = dot(row(i), w);
  }
  return s;
}

double QueryInstance::max_row_norm() const {
  double best = 0.0;
  for (int i = 0; i < num_docs; ++i) {
    best = std::max(best, l2_norm(row(i)));
  }
  return best;
}

bool QueryInstance::degenerate() const {
  if (num_docs < 2) return true;
  return std::all_of(relevance.begin(), relevance.end(),
                     [&](int g) { return g == relevance.front(); });
}

void QueryInstance::validate() const {
  if (num_docs < 1 || num_features < 1) {
    throw InvalidArgumentError("query must have at least one document and one feature");
  }
  if (features.size() !=
      static_cast<std::size_t>(num_docs) * static_cast<std::size_t>(num_features)) {
    throw DimensionError("feature matrix size does not match num_docs * num_features");
  }
  if (static_cast<int>(relevance.size()) != num_docs) {
    throw DimensionError("relevance length does not match document count");
  }
  for (double x : features) {
    if (!std::isfinite(x)) {
      throw InvalidArgumentError("non-finite feature value");
    }
  }
  validate_relevance(relevance);
}

double l2_norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace slamrank
