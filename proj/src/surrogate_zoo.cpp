#include "slamrank/surrogate_zoo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "slamrank/ranking_metrics.hpp"
#include "slamrank/slam_surrogate.hpp"

namespace slamrank {

namespace {

constexpr int kStructMarginLimit = 8;

void check_lengths(const Scores& s, const Relevance& rel) {
  if (s.size() != rel.size()) {
    throw DimensionError("score length does not match relevance length");
  }
}

Scores softmax(const Scores& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  Scores p(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - top);
    total += p[i];
  }
  for (double& x : p) x /= total;
  return p;
}

void check_distinct_grades(const Relevance& rel) {
  Relevance sorted = rel;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgumentError(
        "invalid relevance: structured margin requires all-distinct grades");
  }
}

// Negative-rank encoding: documents ranked earlier get larger entries.
std::vector<double> rank_encoding(const Permutation& pi) {
  std::vector<double> a(pi.size());
  for (int doc = 0; doc < pi.size(); ++doc) {
    a[doc] = -static_cast<double>(pi.inverse[doc] + 1);
  }
  return a;
}

struct StructMarginEval {
  double loss = 0.0;
  Scores grad;
};

StructMarginEval struct_margin_eval(const Scores& s, const Relevance& rel) {
  check_lengths(s, rel);
  validate_relevance(rel);
  check_distinct_grades(rel);
  const int m = static_cast<int>(rel.size());
  if (m > kStructMarginLimit) {
    throw SizeError("structured margin enumeration limited to m <= 8");
  }
  const Permutation y_q =
      Permutation::from_order(canonical_order(rel));  // unique: grades distinct
  const std::vector<double> a_q = rank_encoding(y_q);
  // Rank-order summation, matching the enumeration loop below term for term,
  // so the candidate y = y_q evaluates to exactly zero.
  double s_dot_aq = 0.0;
  for (int p = 0; p < m; ++p) {
    s_dot_aq -= s[y_q.order[p]] * static_cast<double>(p + 1);
  }
  const double z = ideal_dcg(rel);

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  double best = 0.0;  // y = y_q gives exactly 0
  std::vector<int> best_order = y_q.order;
  do {
    double dcg = 0.0;
    double s_dot_a = 0.0;
    for (int p = 0; p < m; ++p) {
      const int doc = order[p];
      dcg += gain(rel[doc]) * discount(p + 1);
      s_dot_a -= s[doc] * static_cast<double>(p + 1);
    }
    const double value = (1.0 - dcg / z) + s_dot_a - s_dot_aq;
    if (value > best) {
      best = value;
      best_order = order;
    }
  } while (std::next_permutation(order.begin(), order.end()));

  StructMarginEval out;
  out.loss = best;
  out.grad.assign(m, 0.0);
  if (best > 0.0) {
    const std::vector<double> a_star =
        rank_encoding(Permutation::from_order(best_order));
    for (int i = 0; i < m; ++i) out.grad[i] = a_star[i] - a_q[i];
  }
  return out;
}

}  // namespace

std::string surrogate_tag(SurrogateKind kind) {
  switch (kind) {
    case SurrogateKind::SlamNdcg:
      return "slam-ndcg";
    case SurrogateKind::SlamMap:
      return "slam-map";
    case SurrogateKind::RankSvm:
      return "ranksvm";
    case SurrogateKind::ListNet:
      return "listnet";
    case SurrogateKind::StructMargin:
      return "structmargin";
  }
  return "slam-ndcg";
}

SurrogateKind surrogate_kind_from_tag(const std::string& tag) {
  if (tag == "slam-ndcg") return SurrogateKind::SlamNdcg;
  if (tag == "slam-map") return SurrogateKind::SlamMap;
  if (tag == "ranksvm") return SurrogateKind::RankSvm;
  if (tag == "listnet") return SurrogateKind::ListNet;
  if (tag == "structmargin") return SurrogateKind::StructMargin;
  throw InvalidArgumentError("unknown surrogate kind: " + tag);
}

double ranksvm_loss(const Scores& s, const Relevance& rel) {
  check_lengths(s, rel);
  validate_binary_relevance(rel);
  const int m = static_cast<int>(s.size());
  double loss = 0.0;
  for (int i = 0; i < m; ++i) {
    if (rel[i] != 1) continue;
    for (int j = 0; j < m; ++j) {
      if (rel[j] != 0) continue;
      const double slack = 1.0 + s[j] - s[i];
      if (slack > 0.0) loss += slack;
    }
  }
  return loss;
}

Scores ranksvm_grad(const Scores& s, const Relevance& rel) {
  check_lengths(s, rel);
  validate_binary_relevance(rel);
  const int m = static_cast<int>(s.size());
  Scores g(m, 0.0);
  for (int i = 0; i < m; ++i) {
    if (rel[i] != 1) continue;
    for (int j = 0; j < m; ++j) {
      if (rel[j] != 0) continue;
      if (1.0 + s[j] - s[i] > 0.0) {
        g[j] += 1.0;
        g[i] -= 1.0;
      }
    }
  }
  return g;
}

double listnet_loss(const Scores& s, const Relevance& rel) {
  check_lengths(s, rel);
  validate_relevance(rel);
  Scores grade_logits(rel.begin(), rel.end());
  const Scores target = softmax(grade_logits);
  const double top = *std::max_element(s.begin(), s.end());
  double log_norm = 0.0;
  for (double x : s) log_norm += std::exp(x - top);
  log_norm = std::log(log_norm) + top;
  double loss = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    loss -= target[i] * (s[i] - log_norm);
  }
  return loss;
}

Scores listnet_grad(const Scores& s, const Relevance& rel) {
  check_lengths(s, rel);
  validate_relevance(rel);
  Scores grade_logits(rel.begin(), rel.end());
  const Scores target = softmax(grade_logits);
  Scores g = softmax(s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    g[i] -= target[i];
  }
  return g;
}

double struct_margin_loss(const Scores& s, const Relevance& rel) {
  return struct_margin_eval(s, rel).loss;
}

Scores struct_margin_grad(const Scores& s, const Relevance& rel) {
  return struct_margin_eval(s, rel).grad;
}

double surrogate_loss(SurrogateKind kind, const Scores& s,
                      const Relevance& rel) {
  switch (kind) {
    case SurrogateKind::SlamNdcg:
      return slam_loss(s, rel, weights_ndcg(rel));
    case SurrogateKind::SlamMap:
      return slam_loss(s, rel, weights_map(rel));
    case SurrogateKind::RankSvm:
      return ranksvm_loss(s, rel);
    case SurrogateKind::ListNet:
      return listnet_loss(s, rel);
    case SurrogateKind::StructMargin:
      return struct_margin_loss(s, rel);
  }
  throw InvalidArgumentError("unknown surrogate kind");
}

Scores surrogate_grad(SurrogateKind kind, const Scores& s,
                      const Relevance& rel) {
  switch (kind) {
    case SurrogateKind::SlamNdcg:
      return slam_subgradient_scores(s, rel, weights_ndcg(rel));
    case SurrogateKind::SlamMap:
      return slam_subgradient_scores(s, rel, weights_map(rel));
    case SurrogateKind::RankSvm:
      return ranksvm_grad(s, rel);
    case SurrogateKind::ListNet:
      return listnet_grad(s, rel);
    case SurrogateKind::StructMargin:
      return struct_margin_grad(s, rel);
  }
  throw InvalidArgumentError("unknown surrogate kind");
}

namespace {

double l1_norm(const Scores& v) {
  double acc = 0.0;
  for (double x : v) acc += std::abs(x);
  return acc;
}

// Worst-case relevance pattern per kind. Fixing the pattern and letting the
// scores run adversarial keeps the profile measuring growth in m rather
// than growth in the relevance shape: the true sup over all relevance
// vectors of the SLAM weight sum creeps up with m even though it is
// bounded, which would blur the flat-vs-linear-vs-quadratic separation the
// profile exists to show.
Relevance profile_relevance(SurrogateKind kind, int m) {
  switch (kind) {
    case SurrogateKind::SlamNdcg:
    case SurrogateKind::SlamMap:
    case SurrogateKind::ListNet: {
      // Balanced binary: top half relevant.
      Relevance rel(m, 0);
      std::fill(rel.begin(), rel.begin() + (m + 1) / 2, 1);
      return rel;
    }
    case SurrogateKind::RankSvm: {
      // One irrelevant document; m-1 hinge pairs.
      Relevance rel(m, 1);
      rel[m - 1] = 0;
      return rel;
    }
    case SurrogateKind::StructMargin: {
      // All-distinct grades, already sorted.
      Relevance rel(m);
      for (int i = 0; i < m; ++i) rel[i] = m - 1 - i;
      return rel;
    }
  }
  return Relevance(m, 0);
}

// Deterministic worst-case score vectors for the pattern above: a full
// reversal (every less relevant document outscores every more relevant one
// by a wide margin) and a spike concentrating all score mass on the least
// relevant document.
std::vector<Scores> profile_witnesses(int m) {
  Scores reversal(m);
  for (int i = 0; i < m; ++i) {
    reversal[i] = 10.0 * static_cast<double>(i - m);
  }
  Scores spike(m, 0.0);
  spike[m - 1] = 50.0;
  return {reversal, spike};
}

}  // namespace

LipschitzProfile lipschitz_profile(SurrogateKind kind,
                                   std::span<const int> m_values,
                                   long long trials, std::uint64_t seed) {
  if (trials < 1) {
    throw InvalidArgumentError("trials must be >= 1");
  }
  if (m_values.empty()) {
    throw InvalidArgumentError("m grid must be nonempty");
  }
  LipschitzProfile profile;
  profile.kind = kind;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (int m : m_values) {
    if (m < 2) {
      throw InvalidArgumentError("m grid entries must be >= 2");
    }
    if (kind == SurrogateKind::StructMargin && m > kStructMarginLimit) {
      throw SizeError("structured margin profile limited to m <= 8");
    }
    const Relevance rel = profile_relevance(kind, m);
    double sup = 0.0;
    long long count = 0;
    for (const Scores& s : profile_witnesses(m)) {
      sup = std::max(sup, l1_norm(surrogate_grad(kind, s, rel)));
      ++count;
    }
    for (long long t = 0; t < trials; ++t) {
      Scores s(m);
      for (double& x : s) x = normal(rng);
      sup = std::max(sup, l1_norm(surrogate_grad(kind, s, rel)));
      ++count;
    }
    profile.records.push_back({m, sup, count});
  }

  // Least-squares slope of log sup against log m.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (const LipschitzRecord& rec : profile.records) {
    if (rec.sup_l1 <= 0.0) continue;
    const double x = std::log(static_cast<double>(rec.m));
    const double y = std::log(rec.sup_l1);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n >= 2 && sxx * n - sx * sx > 0.0) {
    profile.growth_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return profile;
}

std::string LipschitzProfile::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "kind,m,sup_l1,trials\n";
  for (const LipschitzRecord& rec : records) {
    out << surrogate_tag(kind) << ',' << rec.m << ',' << rec.sup_l1 << ','
        << rec.trials << '\n';
  }
  return out.str();
}

}  // namespace slamrank
