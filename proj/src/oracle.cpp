#include "slamrank/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "slamrank/ranking_metrics.hpp"
#include "slamrank/online_perceptron.hpp"
#include "slamrank/slam_surrogate.hpp"

namespace slamrank {

namespace {

constexpr int kBruteForceLimit = 8;
constexpr int kExhaustiveOrderingLimit = 5;

std::string describe_instance(const Scores& s, const Relevance& rel) {
  std::ostringstream out;
  out << "R=(";
  for (std::size_t i = 0; i < rel.size(); ++i) {
    out << (i ? "," : "") << rel[i];
  }
  out << ") s=(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << (i ? "," : "") << s[i];
  }
  out << ")";
  return out.str();
}

Relevance random_relevance(std::mt19937_64& rng, int m, int max_grade) {
  std::uniform_int_distribution<int> grade(0, max_grade);
  Relevance rel(m);
  for (int& g : rel) g = grade(rng);
  return rel;
}

Scores random_scores(std::mt19937_64& rng, int m, double sigma = 1.0) {
  std::normal_distribution<double> normal(0.0, sigma);
  Scores s(m);
  for (double& x : s) x = normal(rng);
  return s;
}

// Shrinks the first positive weight entry; used as a negative control to
// show the verification machinery detects broken weight vectors.
void apply_weight_defect(SlamWeights& w, double eps) {
  if (eps <= 0.0) return;
  for (double& x : w.v) {
    if (x > 0.0) {
      x = std::max(0.0, x - eps);
      return;
    }
  }
}

// Enumerates every weak ordering of scores together with every consistent
// tie resolution: each (permutation, tie-mask) pair realizes one resolution
// of one ordering. The callback receives the realizing score vector and the
// resolving permutation.
template <typename Fn>
void for_each_ordering_and_resolution(int m, Fn&& fn) {
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  const unsigned masks = m > 1 ? 1u << (m - 1) : 1u;
  do {
    for (unsigned mask = 0; mask < masks; ++mask) {
      Scores s(m, 0.0);
      int level = 0;
      s[order[0]] = 0.0;
      for (int p = 1; p < m; ++p) {
        if (!((mask >> (p - 1)) & 1u)) ++level;
        s[order[p]] = -static_cast<double>(level);
      }
      fn(s, Permutation::from_order(order));
    }
  } while (std::next_permutation(order.begin(), order.end()));
}

// Odometer over all grade vectors of length m with entries in [0, top].
bool next_grades(Relevance& rel, int top) {
  for (int i = static_cast<int>(rel.size()) - 1; i >= 0; --i) {
    if (rel[i] < top) {
      ++rel[i];
      std::fill(rel.begin() + i + 1, rel.end(), 0);
      return true;
    }
  }
  return false;
}

double metric_for_permutation(const RankingMeasure& measure,
                              const Permutation& pi, const Relevance& rel) {
  if (measure.kind == RankingMeasure::Kind::Map) {
    return map_for_permutation(pi, rel);
  }
  return ndcg_for_permutation(pi, rel);
}

}  // namespace

void VerificationReport::add(double margin, const std::string& description) {
  ++trials;
  worst_margin = std::min(worst_margin, margin);
  if (margin < -kViolationTolerance) {
    ++violations;
    if (witness.empty()) witness = description;
  }
}

void VerificationReport::merge(const VerificationReport& other) {
  trials += other.trials;
  violations += other.violations;
  worst_margin = std::min(worst_margin, other.worst_margin);
  if (witness.empty()) witness = other.witness;
}

std::string VerificationReport::text() const {
  std::ostringstream out;
  out << (passed() ? "PASS" : "FAIL") << " " << property << ": " << trials
      << " trials, " << violations << " violations, worst margin "
      << worst_margin;
  if (!witness.empty()) out << "\n  witness: " << witness;
  return out.str();
}

std::string VerificationReport::record() const {
  std::ostringstream out;
  out << "property=" << property << " trials=" << trials
      << " violations=" << violations << " worst_margin=" << worst_margin;
  return out.str();
}

double brute_ideal_dcg(const Relevance& rel) {
  return brute_ideal_dcg(rel, static_cast<int>(rel.size()));
}

double brute_ideal_dcg(const Relevance& rel, int k) {
  validate_relevance(rel);
  const int m = static_cast<int>(rel.size());
  if (m > kBruteForceLimit) {
    throw SizeError("brute-force ideal DCG limited to m <= 8");
  }
  if (k < 1 || k > m) {
    throw InvalidArgumentError("invalid cutoff: k must be in [1, m]");
  }
  // The truncated ideal sums over the k most relevant documents.
  const std::vector<int> canon = canonical_order(rel);
  std::vector<bool> in_top(m, false);
  for (int i = 0; i < k; ++i) in_top[canon[i]] = true;

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  double best = 0.0;
  do {
    double value = 0.0;
    for (int p = 0; p < m; ++p) {
      if (in_top[order[p]]) {
        value += gain(rel[order[p]]) * discount(p + 1);
      }
    }
    best = std::max(best, value);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

double worst_case_map_loss(int m, int r, int blocked_prefix) {
  if (m < 1 || r < 1 || r > m || blocked_prefix < 0 || blocked_prefix >= r) {
    throw InvalidArgumentError(
        "worst_case_map_loss requires 0 <= blocked_prefix < r <= m");
  }
  double sum = static_cast<double>(blocked_prefix);
  for (int i = blocked_prefix + 1; i <= r; ++i) {
    sum += static_cast<double>(i) / static_cast<double>(m - r + i);
  }
  return 1.0 - sum / static_cast<double>(r);
}

VerificationReport verify_upper_bound(const RankingMeasure& measure,
                                      long long trials, int m_max,
                                      std::uint64_t seed,
                                      double weight_defect) {
  if (trials < 1) {
    throw InvalidArgumentError("trials must be >= 1");
  }
  const bool is_map = measure.kind == RankingMeasure::Kind::Map;
  VerificationReport report;
  report.property = std::string("upper-bound-") + measure.tag();

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> m_dist(1, m_max);
  for (long long t = 0; t < trials; ++t) {
    const int m = m_dist(rng);
    const Relevance rel = random_relevance(rng, m, is_map ? 1 : 4);
    const Scores s = random_scores(rng, m);
    SlamWeights w = weights_for(measure, rel);
    apply_weight_defect(w, weight_defect);
    const double margin =
        slam_loss(s, rel, w) - measure_loss(s, rel, measure);
    report.add(margin, describe_instance(s, rel));
  }

  // Every score ordering and tie resolution at small m; ties are scored
  // under each consistent ranking, not just the index-order resolution.
  for (int m = 1; m <= kExhaustiveOrderingLimit; ++m) {
    Relevance rel(m, 0);
    do {
      SlamWeights w = weights_for(measure, rel);
      apply_weight_defect(w, weight_defect);
      for_each_ordering_and_resolution(m, [&](const Scores& s,
                                              const Permutation& pi) {
        const double margin = slam_loss(s, rel, w) -
                              (1.0 - metric_for_permutation(measure, pi, rel));
        report.add(margin, describe_instance(s, rel) + " (exhaustive)");
      });
    } while (next_grades(rel, is_map ? 1 : 2));
  }
  return report;
}

VerificationReport verify_upper_bound_at_k(long long trials, int m_max,
                                           std::uint64_t seed,
                                           double weight_defect) {
  if (trials < 1) {
    throw InvalidArgumentError("trials must be >= 1");
  }
  VerificationReport report;
  report.property = "upper-bound-ndcg@k";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> m_dist(1, m_max);
  for (long long t = 0; t < trials; ++t) {
    const int m = m_dist(rng);
    Relevance rel = random_relevance(rng, m, 4);
    std::sort(rel.begin(), rel.end(), std::greater<int>());
    const Scores s = random_scores(rng, m);
    std::uniform_int_distribution<int> k_dist(1, m);
    const int k = k_dist(rng);
    SlamWeights w = weights_ndcg_at_k(rel, k);
    apply_weight_defect(w, weight_defect);
    const double margin =
        slam_loss(s, rel, w) - (1.0 - ndcg_at_k(s, rel, k));
    report.add(margin,
               describe_instance(s, rel) + " k=" + std::to_string(k));
  }
  return report;
}

namespace {

// Instances cycled through by the subgradient and convexity checks: the
// three measure constructions plus an arbitrary nonnegative weight vector
// (the loss is convex for any such vector, not just the named ones).
struct WeightedInstance {
  Relevance rel;
  SlamWeights weights;
};

WeightedInstance pick_instance(std::mt19937_64& rng, int m, int selector) {
  switch (selector % 4) {
    case 0: {
      Relevance rel = random_relevance(rng, m, 4);
      return {rel, weights_ndcg(rel)};
    }
    case 1: {
      Relevance rel = random_relevance(rng, m, 1);
      return {rel, weights_map(rel)};
    }
    case 2: {
      Relevance rel = random_relevance(rng, m, 4);
      std::sort(rel.begin(), rel.end(), std::greater<int>());
      std::uniform_int_distribution<int> k_dist(1, m);
      return {rel, weights_ndcg_at_k(rel, k_dist(rng))};
    }
    default: {
      Relevance rel = random_relevance(rng, m, 4);
      SlamWeights w;
      w.measure = RankingMeasure::ndcg();
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      w.v.resize(m);
      for (double& x : w.v) {
        const double u = unit(rng);
        x = u < 0.25 ? 0.0 : u;  // mix in exact zeros
      }
      return {rel, w};
    }
  }
}

}  // namespace

VerificationReport verify_subgradient(long long trials, std::uint64_t seed) {
  if (trials < 1) {
    throw InvalidArgumentError("trials must be >= 1");
  }
  VerificationReport report;
  report.property = "slam-subgradient-inequality";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> m_dist(2, 8);
  const double scales[] = {1e-3, 1.0, 1e3};
  for (long long t = 0; t < trials; ++t) {
    const int m = m_dist(rng);
    const auto [rel, w] = pick_instance(rng, m, static_cast<int>(t));
    const Scores s = random_scores(rng, m, 2.0);
    const Scores s2 = random_scores(rng, m, 2.0);
    const double phi_s = slam_loss(s, rel, w);
    const Scores g = slam_subgradient_scores(s, rel, w);
    for (double scale : scales) {
      Scores shifted(m);
      double linear = 0.0;
      for (int i = 0; i < m; ++i) {
        const double dir = s2[i] - s[i];
        shifted[i] = s[i] + scale * dir;
        linear += g[i] * scale * dir;
      }
      const double margin = slam_loss(shifted, rel, w) - phi_s - linear;
      report.add(margin, describe_instance(s, rel) + " scale=" +
                             std::to_string(scale));
    }
  }
  return report;
}

VerificationReport verify_convexity(long long trials, std::uint64_t seed) {
  if (trials < 1) {
    throw InvalidArgumentError("trials must be >= 1");
  }
  VerificationReport report;
  report.property = "slam-midpoint-convexity";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> m_dist(2, 8);
  for (long long t = 0; t < trials; ++t) {
    const int m = m_dist(rng);
    const auto [rel, w] = pick_instance(rng, m, static_cast<int>(t));
    const Scores a = random_scores(rng, m, 2.0);
    const Scores b = random_scores(rng, m, 2.0);
    Scores mid(m);
    for (int i = 0; i < m; ++i) mid[i] = 0.5 * (a[i] + b[i]);
    const double margin = 0.5 * (slam_loss(a, rel, w) + slam_loss(b, rel, w)) -
                          slam_loss(mid, rel, w);
    report.add(margin, describe_instance(a, rel));
  }
  return report;
}

VerificationReport verify_dominance_map(int m_max, double epsilon) {
  if (epsilon < 0.0) {
    throw InvalidArgumentError("epsilon must be nonnegative");
  }
  // Realizes "infinitesimally greater" with a concrete finite eta; the
  // violation it produces is of order epsilon, far above the tolerance.
  const double eta = 1e-6;
  VerificationReport report;
  report.property = "map-weights-dominance";
  for (int m = 2; m <= m_max; ++m) {
    for (int r = 1; r < m; ++r) {
      Relevance rel(m, 0);
      std::fill(rel.begin(), rel.begin() + r, 1);
      const SlamWeights v = weights_map(rel);
      for (int i = 1; i <= r; ++i) {
        SlamWeights reduced = v;
        reduced.v[i - 1] = std::max(0.0, reduced.v[i - 1] - epsilon);

        // The first i-1 relevant documents sit safely on top, every
        // irrelevant document just outscores relevant documents i..r.
        Scores s(m, 1.0);
        for (int p = 0; p < i - 1; ++p) s[p] = 3.0;
        for (int p = r; p < m; ++p) s[p] = 1.0 + eta;

        const double induced = 1.0 - map_score(s, rel);
        const double phi_reduced = slam_loss(s, rel, reduced);
        const double phi_original = slam_loss(s, rel, v);

        ++report.trials;
        report.worst_margin =
            std::min(report.worst_margin, induced - phi_reduced);
        const bool bound_broken = phi_reduced - induced < -kViolationTolerance;
        const bool original_holds =
            phi_original - induced >= -kViolationTolerance;
        if (!(bound_broken && original_holds)) {
          ++report.violations;
          if (report.witness.empty()) {
            report.witness = "m=" + std::to_string(m) +
                             " r=" + std::to_string(r) +
                             " i=" + std::to_string(i) +
                             (bound_broken ? " (original bound failed)"
                                           : " (no violation produced)");
          }
        }
      }
    }
  }
  return report;
}

VerificationReport verify_subgradient_norms(long long trials,
                                            std::uint64_t seed) {
  if (trials < 1) {
    throw InvalidArgumentError("trials must be >= 1");
  }
  VerificationReport report;
  report.property = "subgradient-norm-bound";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> m_dist(2, 8);
  std::uniform_int_distribution<int> d_dist(2, 6);
  std::uniform_real_distribution<double> w_scale(0.0, 2.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (long long t = 0; t < trials; ++t) {
    const int m = m_dist(rng);
    const int d = d_dist(rng);
    QueryInstance q;
    q.num_docs = m;
    q.num_features = d;
    q.features.resize(static_cast<std::size_t>(m) * d);
    for (double& x : q.features) x = normal(rng);
    RankingMeasure measure;
    switch (t % 3) {
      case 0:
        measure = RankingMeasure::ndcg();
        q.relevance = random_relevance(rng, m, 4);
        break;
      case 1:
        measure = RankingMeasure::map();
        q.relevance = random_relevance(rng, m, 1);
        break;
      default: {
        std::uniform_int_distribution<int> k_dist(1, m);
        measure = RankingMeasure::ndcg_at(k_dist(rng));
        q.relevance = random_relevance(rng, m, 4);
        break;
      }
    }
    std::vector<double> w(d);
    const double scale = w_scale(rng);
    for (double& x : w) x = scale * normal(rng);
    const NormCheck check = subgradient_norm_check(q, w, measure);
    report.add(check.rhs - check.lhs,
               "m=" + std::to_string(m) + " d=" + std::to_string(d) +
                   " measure=" + measure.tag());
  }
  return report;
}

std::vector<VerificationReport> run_verification_suite(
    const std::string& suite, long long trials, std::uint64_t seed, int m_max,
    double weight_defect) {
  std::vector<VerificationReport> reports;
  const bool all = suite == "all";
  if (suite == "bounds" || all) {
    reports.push_back(verify_upper_bound(RankingMeasure::map(), trials, m_max,
                                         seed, weight_defect));
    reports.push_back(verify_upper_bound(RankingMeasure::ndcg(), trials, m_max,
                                         seed + 1, weight_defect));
    reports.push_back(
        verify_upper_bound_at_k(trials, m_max, seed + 2, weight_defect));
  }
  if (suite == "subgradients" || all) {
    reports.push_back(verify_subgradient(trials, seed + 3));
    reports.push_back(verify_convexity(trials, seed + 4));
  }
  if (suite == "dominance" || all) {
    reports.push_back(verify_dominance_map(m_max, 1e-3));
  }
  if (suite == "norms" || all) {
    reports.push_back(verify_subgradient_norms(trials, seed + 5));
  }
  if (reports.empty()) {
    throw InvalidArgumentError("unknown verification suite: " + suite);
  }
  return reports;
}

}  // namespace slamrank
