#include "slamrank/online_perceptron.hpp"

#include <cmath>
#include <sstream>

#include "slamrank/ranking_metrics.hpp"
#include "slamrank/slam_surrogate.hpp"

namespace slamrank {

OnlineState OnlineState::init(int num_features) {
  if (num_features < 1) {
    throw InvalidArgumentError("feature dimension must be >= 1");
  }
  OnlineState state;
  state.w.assign(num_features, 0.0);
  return state;
}

double surrogate_f(std::span<const double> w, const QueryInstance& q,
                   const RankingMeasure& measure) {
  const Scores s = q.scores(w);
  if (measure_loss(s, q.relevance, measure) == 0.0) return 0.0;
  return slam_loss(s, q.relevance, weights_for(measure, q.relevance));
}

RoundRecord step(OnlineState& state, const QueryInstance& q,
                 const RankingMeasure& measure) {
  if (static_cast<int>(state.w.size()) != q.num_features) {
    throw DimensionError("state dimension does not match query features");
  }
  RoundRecord rec;
  rec.t = ++state.round;
  rec.w_norm = l2_norm(state.w);

  const Scores s = q.scores(state.w);
  rec.rml = measure_loss(s, q.relevance, measure);
  if (rec.rml != 0.0) {
    const SlamWeights v = weights_for(measure, q.relevance);
    rec.surrogate = slam_loss(s, q.relevance, v);
    const std::vector<double> z = slam_subgradient_params(q, state.w, v);
    for (int f = 0; f < q.num_features; ++f) {
      state.w[f] -= z[f];
    }
    rec.updated = true;
    ++state.update_count;
    state.v_max_seen = std::max(state.v_max_seen, v_max_ratio(v));
  }
  state.cumulative_rml += rec.rml;
  state.cumulative_surrogate += rec.surrogate;
  return rec;
}

TrainLog run(std::span<const QueryInstance> data,
             const RankingMeasure& measure) {
  if (data.empty()) {
    throw InvalidArgumentError("online run requires a nonempty stream");
  }
  OnlineState state = OnlineState::init(data.front().num_features);
  TrainLog log;
  log.rounds.reserve(data.size());
  for (const QueryInstance& q : data) {
    const RoundRecord rec = step(state, q, measure);
    log.rounds.push_back(rec);
    if (rec.updated) log.last_update_round = rec.t;
    log.max_docs = std::max(log.max_docs, q.num_docs);
    log.max_row_norm = std::max(log.max_row_norm, q.max_row_norm());
  }
  log.final_w = state.w;
  log.cumulative_rml = state.cumulative_rml;
  log.cumulative_surrogate = state.cumulative_surrogate;
  log.update_count = state.update_count;
  log.v_max_seen = state.v_max_seen;
  return log;
}

std::string TrainLog::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "t,rml_loss,surrogate,updated,w_norm\n";
  for (const RoundRecord& rec : rounds) {
    out << rec.t << ',' << rec.rml << ',' << rec.surrogate << ','
        << (rec.updated ? 1 : 0) << ',' << rec.w_norm << '\n';
  }
  return out.str();
}

double sum_surrogate_at(std::span<const QueryInstance> data,
                        const RankingMeasure& measure,
                        std::span<const double> u,
                        const std::vector<bool>& update_mask) {
  if (update_mask.size() != data.size()) {
    throw DimensionError("update mask length does not match stream length");
  }
  double total = 0.0;
  for (std::size_t t = 0; t < data.size(); ++t) {
    if (!update_mask[t]) continue;  // f_t is gated by the loss at w_t
    const Scores s = data[t].scores(u);
    total += slam_loss(s, data[t].relevance,
                       weights_for(measure, data[t].relevance));
  }
  return total;
}

double cumulative_bound(double sum_f_u, double norm_u, int m, double r_x,
                        double v_max) {
  if (sum_f_u < 0.0 || norm_u < 0.0 || m < 0 || r_x < 0.0 || v_max < 0.0) {
    throw InvalidArgumentError("bound inputs must be nonnegative");
  }
  return 2.0 * sum_f_u + 4.0 * norm_u * norm_u * m * r_x * r_x * v_max;
}

double margin_bound(double gamma, int m, double r_x, double v_max) {
  if (gamma <= 0.0) {
    throw InvalidArgumentError("margin gamma must be positive");
  }
  if (m < 0 || r_x < 0.0 || v_max < 0.0) {
    throw InvalidArgumentError("bound inputs must be nonnegative");
  }
  return 4.0 * m * r_x * r_x * v_max / (gamma * gamma);
}

double at_k_bound(double sum_f_u, double norm_u, int k, double r_x,
                  double v_max) {
  return cumulative_bound(sum_f_u, norm_u, k, r_x, v_max);
}

NormCheck subgradient_norm_check(const QueryInstance& q,
                                 std::span<const double> w,
                                 const RankingMeasure& measure) {
  const Scores s = q.scores(w);
  if (measure_loss(s, q.relevance, measure) == 0.0) {
    return {0.0, 0.0};
  }
  const SlamWeights v = weights_for(measure, q.relevance);
  const std::vector<double> z = slam_subgradient_params(q, w, v);
  const double norm = l2_norm(z);
  const double r_x = q.max_row_norm();
  const double f = slam_loss(s, q.relevance, v);
  return {norm * norm, 4.0 * q.num_docs * r_x * r_x * v_max_ratio(v) * f};
}

BoundReport make_bound_report(const TrainLog& log,
                              std::span<const QueryInstance> data,
                              const RankingMeasure& measure,
                              std::span<const double> u,
                              const std::string& comparator_desc) {
  std::vector<bool> mask(log.rounds.size());
  for (std::size_t t = 0; t < log.rounds.size(); ++t) {
    mask[t] = log.rounds[t].updated;
  }
  BoundReport report;
  report.comparator = comparator_desc;
  report.norm_u = l2_norm(u);
  report.r_x = log.max_row_norm;
  report.m = log.max_docs;
  report.v_max = log.v_max_seen;
  report.sum_f_u = sum_surrogate_at(data, measure, u, mask);
  report.bound = cumulative_bound(report.sum_f_u, report.norm_u, report.m,
                                  report.r_x, report.v_max);
  report.observed = log.cumulative_rml;
  return report;
}

std::string BoundReport::text() const {
  std::ostringstream out;
  out << "cumulative loss bound (comparator: " << comparator << ")\n"
      << "  ||u||          " << norm_u << "\n"
      << "  R_X            " << r_x << "\n"
      << "  m              " << m << "\n"
      << "  v_max          " << v_max << "\n"
      << "  sum f_t(u)     " << sum_f_u << "\n"
      << "  bound          " << bound << "\n"
      << "  observed loss  " << observed << "\n"
      << "  holds          " << (holds() ? "yes" : "NO");
  return out.str();
}

std::string BoundReport::record() const {
  std::ostringstream out;
  out << "comparator=" << comparator << " norm_u=" << norm_u << " r_x=" << r_x
      << " m=" << m << " v_max=" << v_max << " sum_f_u=" << sum_f_u
      << " bound=" << bound << " observed=" << observed
      << " holds=" << (holds() ? 1 : 0);
  return out.str();
}

}  // namespace slamrank
