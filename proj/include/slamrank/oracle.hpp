#ifndef SLAMRANK_ORACLE_HPP_
#define SLAMRANK_ORACLE_HPP_

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "slamrank/types.hpp"

// Brute-force and adversarial reference checks for the closed-form claims:
// upper-bound inequalities, subgradient validity, convexity, weight
// dominance and the subgradient norm bound, all at small m.

namespace slamrank {

// A margin below this counts as a violation of the inequality under check.
inline constexpr double kViolationTolerance = 1e-9;

struct VerificationReport {
  std::string property;
  long long trials = 0;
  long long violations = 0;
  // min over trials of LHS - RHS of the inequality (recorded even on pass).
  double worst_margin = std::numeric_limits<double>::infinity();
  std::string witness;  // first violating instance, when any

  bool passed() const { return violations == 0; }
  void add(double margin, const std::string& description);
  void merge(const VerificationReport& other);

  std::string text() const;    // human-readable summary line
  std::string record() const;  // machine-readable key=value line
};

// Exhaustive max of (truncated) DCG over all m! rankings; m <= 8.
double brute_ideal_dcg(const Relevance& rel);
double brute_ideal_dcg(const Relevance& rel, int k);

// Max MAP loss when every irrelevant document outscores all but the first
// `blocked_prefix` relevant documents: 1 - (1/r)(p + sum_{i>p} i/(m-r+i)).
double worst_case_map_loss(int m, int r, int blocked_prefix);

// Theorem-style upper-bound check: slam_loss >= induced loss on random
// instances with m <= m_max, plus, for NDCG and MAP, every score ordering
// and tie resolution for m <= 5. weight_defect > 0 shrinks the first
// positive weight entry and is expected to break the bound (negative
// control).
VerificationReport verify_upper_bound(const RankingMeasure& measure,
                                      long long trials, int m_max,
                                      std::uint64_t seed,
                                      double weight_defect = 0.0);

// Truncated variant: random relevance-sorted instances with a per-instance
// cutoff drawn uniformly from [1, m].
VerificationReport verify_upper_bound_at_k(long long trials, int m_max,
                                           std::uint64_t seed,
                                           double weight_defect = 0.0);

// Subgradient inequality phi(s') >= phi(s) + <g, s' - s> on random pairs,
// including scaled directions.
VerificationReport verify_subgradient(long long trials, std::uint64_t seed);

// Midpoint convexity phi((s+s')/2) <= (phi(s) + phi(s'))/2 on random pairs.
VerificationReport verify_convexity(long long trials, std::uint64_t seed);

// For every (m <= m_max, r, coordinate), shrinking that coordinate of v_MAP
// by epsilon must break the MAP upper bound on the adversarial instance from
// the dominance argument. A case that fails to produce a violation counts
// as a violation of this report.
VerificationReport verify_dominance_map(int m_max, double epsilon);

// ||z_t||^2 <= 4 m R_X^2 v_max f_t(w_t) on random rounds.
VerificationReport verify_subgradient_norms(long long trials,
                                            std::uint64_t seed);

// Named suite runner: "bounds", "subgradients", "dominance", "norms", "all".
std::vector<VerificationReport> run_verification_suite(
    const std::string& suite, long long trials, std::uint64_t seed,
    int m_max = 8, double weight_defect = 0.0);

}  // namespace slamrank

#endif  // SLAMRANK_ORACLE_HPP_
