#ifndef SLAMRANK_ONLINE_PERCEPTRON_HPP_
#define SLAMRANK_ONLINE_PERCEPTRON_HPP_

#include <span>
#include <string>
#include <vector>

#include "slamrank/types.hpp"

// Perceptron-style online ranker: predict by sorting X_t w_t, and on any
// round with nonzero induced loss step along the SLAM subgradient with unit
// learning rate. Includes the cumulative-loss bound calculators.

namespace slamrank {

struct OnlineState {
  std::vector<double> w;
  long long round = 0;
  double cumulative_rml = 0.0;
  double cumulative_surrogate = 0.0;
  long long update_count = 0;
  // Running max of the positive-entry weight ratio over nondegenerate rounds.
  double v_max_seen = 1.0;

  static OnlineState init(int num_features);
};

struct RoundRecord {
  long long t = 0;
  double rml = 0.0;        // induced ranking loss at w_t
  double surrogate = 0.0;  // f_t(w_t)
  bool updated = false;
  double w_norm = 0.0;     // ||w_t||_2 before the update
};

struct TrainLog {
  std::vector<RoundRecord> rounds;
  std::vector<double> final_w;
  double cumulative_rml = 0.0;
  double cumulative_surrogate = 0.0;
  long long update_count = 0;
  int max_docs = 0;         // stream max m
  double max_row_norm = 0;  // stream R_X
  double v_max_seen = 1.0;
  long long last_update_round = 0;

  std::string to_csv() const;  // t,rml_loss,surrogate,updated,w_norm
};

struct BoundReport {
  std::string comparator;  // description of u
  double norm_u = 0.0;
  double r_x = 0.0;
  int m = 0;
  double v_max = 1.0;
  double sum_f_u = 0.0;
  double bound = 0.0;
  double observed = 0.0;  // cumulative induced loss

  bool holds() const { return observed <= bound; }
  std::string text() const;
  std::string record() const;
};

// f_t: the SLAM surrogate gated by the induced loss at w. Zero whenever the
// ranking induced by X w has zero loss, else slam_loss(X w, R, v(measure)).
double surrogate_f(std::span<const double> w, const QueryInstance& q,
                   const RankingMeasure& measure);

// One online round: predict, incur loss, update in place. Returns the round
// record.
RoundRecord step(OnlineState& state, const QueryInstance& q,
                 const RankingMeasure& measure);

TrainLog run(std::span<const QueryInstance> data,
             const RankingMeasure& measure);

// Sum of f_t(u) over the stream, keeping the per-round gating observed
// during the run (update_mask[t] true iff round t had nonzero loss).
double sum_surrogate_at(std::span<const QueryInstance> data,
                        const RankingMeasure& measure,
                        std::span<const double> u,
                        const std::vector<bool>& update_mask);

// 2 sum_f_u + 4 ||u||^2 m R_X^2 v_max.
double cumulative_bound(double sum_f_u, double norm_u, int m, double r_x,
                        double v_max);

// 4 m R_X^2 v_max / gamma^2, the separable-stream constant.
double margin_bound(double gamma, int m, double r_x, double v_max);

// 2 sum_f_u + 4 ||u||^2 k R_X^2 v_max for the truncated measure.
double at_k_bound(double sum_f_u, double norm_u, int k, double r_x,
                  double v_max);

struct NormCheck {
  double lhs = 0.0;  // ||z_t||^2
  double rhs = 0.0;  // 4 m R_X^2 v_max f_t(w)
};

NormCheck subgradient_norm_check(const QueryInstance& q,
                                 std::span<const double> w,
                                 const RankingMeasure& measure);

BoundReport make_bound_report(const TrainLog& log,
                              std::span<const QueryInstance> data,
                              const RankingMeasure& measure,
                              std::span<const double> u,
                              const std::string& comparator_desc);

}  // namespace slamrank

#endif  // SLAMRANK_ONLINE_PERCEPTRON_HPP_
