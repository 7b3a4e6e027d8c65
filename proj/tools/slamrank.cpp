// slamrank command-line tool: online/batch training, evaluation, bound
// verification, Lipschitz profiling and synthetic data generation.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "slamrank/batch_trainer.hpp"
#include "slamrank/data_io.hpp"
#include "slamrank/online_perceptron.hpp"
#include "slamrank/oracle.hpp"
#include "slamrank/ranking_metrics.hpp"
#include "slamrank/slam_surrogate.hpp"
#include "slamrank/surrogate_zoo.hpp"
#include "slamrank/types.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerificationFailure = 2;
constexpr int kExitIoError = 3;

std::vector<int> parse_int_list(const std::string& csv,
                                const std::string& what) {
  std::vector<int> values;
  std::stringstream stream(csv);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      values.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw slamrank::InvalidArgumentError("bad " + what + " entry: " + item);
    }
  }
  if (values.empty()) {
    throw slamrank::InvalidArgumentError(what + " list is empty");
  }
  return values;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path);
  if (!out) {
    throw slamrank::FormatError("cannot open output file: " + path.string());
  }
  out << content;
  if (!out) {
    throw slamrank::FormatError("failed writing output file: " +
                                path.string());
  }
}

struct OnlineArgs {
  std::string data_path;
  std::string measure = "ndcg";
  std::string out_path;
  std::string log_path;
  std::string comparator = "auto";
};

int run_train_online(const OnlineArgs& args) {
  const slamrank::RankingMeasure measure =
      slamrank::RankingMeasure::from_tag(args.measure);
  const slamrank::Dataset data = slamrank::parse_ranking_file(args.data_path);

  if (measure.kind == slamrank::RankingMeasure::Kind::NdcgAtK) {
    long long clamped = 0;
    for (const auto& q : data.queries) {
      if (q.num_docs < measure.cutoff) ++clamped;
    }
    if (clamped > 0) {
      std::cout << "# note: cutoff k=" << measure.cutoff << " clamped to m on "
                << clamped << " queries\n";
    }
  }

  const slamrank::TrainLog log = slamrank::run(data.queries, measure);
  slamrank::save_model(args.out_path, {log.final_w, measure, 1.0});
  if (!args.log_path.empty()) {
    write_text_file(args.log_path, log.to_csv());
  }

  std::vector<double> u = log.final_w;
  std::string comparator_desc = "final w";
  if (args.comparator != "auto") {
    std::ifstream probe(args.comparator);
    std::string header;
    std::getline(probe, header);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header == "slamrank-sidecar v1") {
      const slamrank::Sidecar sidecar =
          slamrank::load_sidecar(args.comparator);
      if (sidecar.gamma_realized <= 0.0) {
        throw slamrank::FormatError(
            "sidecar has no positive margin; cannot form u_star/gamma");
      }
      u = sidecar.u_star;
      for (double& x : u) x /= sidecar.gamma_realized;
      comparator_desc = "u_star/gamma from " + args.comparator;
    } else {
      u = slamrank::load_model(args.comparator).w;
      comparator_desc = "model " + args.comparator;
    }
  }
  if (u.size() != log.final_w.size()) {
    throw slamrank::DimensionError(
        "comparator dimension does not match data dimension");
  }

  const slamrank::BoundReport report = slamrank::make_bound_report(
      log, data.queries, measure, u, comparator_desc);
  std::cout << "rounds " << log.rounds.size() << ", updates "
            << log.update_count << ", cumulative " << measure.tag()
            << " loss " << log.cumulative_rml << "\n";
  std::cout << report.text() << "\n";
  std::cout << "#record " << report.record() << "\n";
  return kExitOk;
}

struct BatchArgs {
  std::string data_path;
  std::string measure = "ndcg";
  std::string lambda = "auto";
  double ball_radius = 1e3;
  int epochs = 50;
  std::string out_path;
  std::string trace_path;
  std::uint64_t seed = 1;
};

int run_train_batch(const BatchArgs& args) {
  slamrank::BatchConfig cfg;
  cfg.measure = slamrank::RankingMeasure::from_tag(args.measure);
  cfg.ball_radius = args.ball_radius;
  cfg.epochs = args.epochs;
  cfg.seed = args.seed;
  if (args.lambda == "auto") {
    cfg.lambda_auto = true;
  } else {
    try {
      cfg.lambda = std::stod(args.lambda);
    } catch (const std::exception&) {
      throw slamrank::InvalidArgumentError("bad lambda value: " + args.lambda);
    }
  }

  const slamrank::Dataset data = slamrank::parse_ranking_file(args.data_path);
  std::cout << "# seed: " << args.seed << "\n";
  const slamrank::FitResult result = slamrank::fit(data.queries, cfg);
  if (cfg.lambda_auto) {
    std::cout << "lambda (auto): " << result.lambda_used << "\n";
  }
  slamrank::save_model(args.out_path, {result.w, cfg.measure, cfg.delta});

  std::ostringstream trace;
  trace.precision(17);
  trace << "epoch,objective\n";
  for (std::size_t e = 0; e < result.objective_trace.size(); ++e) {
    trace << (e + 1) << ',' << result.objective_trace[e] << '\n';
  }
  if (!args.trace_path.empty()) {
    write_text_file(args.trace_path, trace.str());
  }
  std::cout << "final objective " << result.objective_value << ", train mean "
            << cfg.measure.tag() << " " << result.train_metric_mean << "\n";
  return kExitOk;
}

struct EvalArgs {
  std::string data_path;
  std::string model_path;
  std::string measure;  // empty: use the model's tag
  bool per_query = false;
};

int run_eval(const EvalArgs& args) {
  const slamrank::ModelFile model = slamrank::load_model(args.model_path);
  const slamrank::RankingMeasure measure =
      args.measure.empty() ? model.measure
                           : slamrank::RankingMeasure::from_tag(args.measure);
  const slamrank::Dataset data = slamrank::parse_ranking_file(args.data_path);
  if (data.stats.num_features != static_cast<int>(model.w.size())) {
    throw slamrank::DimensionError(
        "model dimension " + std::to_string(model.w.size()) +
        " does not match data dimension " +
        std::to_string(data.stats.num_features));
  }

  double total = 0.0;
  std::ostringstream per_query;
  per_query.precision(17);
  per_query << "qid,metric,surrogate\n";
  for (const auto& q : data.queries) {
    const slamrank::Scores s = q.scores(model.w);
    const double value = slamrank::measure_value(s, q.relevance, measure);
    total += value;
    if (args.per_query) {
      const double surrogate = slamrank::slam_loss(
          s, q.relevance, slamrank::weights_for(measure, q.relevance),
          model.delta);
      per_query << q.qid << ',' << value << ',' << surrogate << '\n';
    }
  }
  std::cout << "mean " << measure.tag() << " "
            << total / static_cast<double>(data.queries.size()) << "\n";
  if (args.per_query) {
    std::cout << per_query.str();
  }
  return kExitOk;
}

struct VerifyArgs {
  std::string suite = "all";
  long long trials = 10000;
  std::uint64_t seed = 12345;
  int m_max = 8;
  double weight_defect = 0.0;
};

int run_verify(const VerifyArgs& args) {
  std::cout << "# seed: " << args.seed << "\n";
  const std::vector<slamrank::VerificationReport> reports =
      slamrank::run_verification_suite(args.suite, args.trials, args.seed,
                                       args.m_max, args.weight_defect);
  bool ok = true;
  for (const auto& report : reports) {
    std::cout << report.text() << "\n";
    std::cout << "#record " << report.record() << "\n";
    ok = ok && report.passed();
  }
  return ok ? kExitOk : kExitVerificationFailure;
}

struct AnalyzeArgs {
  std::string surrogate = "slam-ndcg";
  std::string m_grid = "5,10,20,40";
  long long trials = 200;
  std::string out_path;
  std::uint64_t seed = 12345;
};

int run_analyze(const AnalyzeArgs& args) {
  const slamrank::SurrogateKind kind =
      slamrank::surrogate_kind_from_tag(args.surrogate);
  const std::vector<int> grid = parse_int_list(args.m_grid, "m-grid");
  std::cout << "# seed: " << args.seed << "\n";
  const slamrank::LipschitzProfile profile =
      slamrank::lipschitz_profile(kind, grid, args.trials, args.seed);
  if (!args.out_path.empty()) {
    write_text_file(args.out_path, profile.to_csv());
  }
  for (const auto& rec : profile.records) {
    std::cout << "m=" << rec.m << " sup_l1=" << rec.sup_l1 << " trials="
              << rec.trials << "\n";
  }
  std::cout << "slope: " << profile.growth_exponent << "\n";
  return kExitOk;
}

struct GenDataArgs {
  long long n = 100;
  int m = 5;
  int d = 10;
  double gamma = 0.0;
  std::string grades = "0,1";
  double noise = 1.0;
  double feature_norm = 1.0;
  std::uint64_t seed = 1;
  std::string out_path;
};

int run_gen_data(const GenDataArgs& args) {
  slamrank::SyntheticSpec spec;
  spec.num_queries = args.n;
  spec.num_docs = args.m;
  spec.num_features = args.d;
  spec.gamma = args.gamma;
  for (int g : parse_int_list(args.grades, "grades")) {
    if (g < 0) {
      throw slamrank::InvalidArgumentError("grades must be nonnegative");
    }
  }
  spec.grades = parse_int_list(args.grades, "grades");
  spec.noise = args.noise;
  spec.feature_norm = args.feature_norm;
  spec.seed = args.seed;

  std::cout << "# seed: " << args.seed << "\n";
  const slamrank::SyntheticData generated = slamrank::generate_synthetic(spec);
  write_text_file(args.out_path,
                  slamrank::serialize_ranking_file(generated.data));
  const std::filesystem::path sidecar_path =
      std::filesystem::path(args.out_path).string() + ".meta";
  slamrank::save_sidecar(sidecar_path, generated.u_star,
                         generated.gamma_realized);
  std::cout << "wrote " << args.out_path << " (" << generated.data.stats.num_queries
            << " queries), sidecar " << sidecar_path.string() << "\n";
  std::cout << "gamma_realized: " << generated.gamma_realized << "\n";
  return kExitOk;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const slamrank::ParseError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitIoError;
  } catch (const slamrank::FormatError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitIoError;
  } catch (const slamrank::EmptyDatasetError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitIoError;
  } catch (const slamrank::DimensionError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitIoError;
  } catch (const std::ios_base::failure& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitIoError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::cout.precision(12);

  CLI::App app{"slamrank: listwise large-margin learning to rank"};
  app.require_subcommand(1);

  OnlineArgs online;
  auto* online_cmd = app.add_subcommand(
      "train-online", "Run the online perceptron-style ranker");
  online_cmd->add_option("--data", online.data_path, "Ranking data file")
      ->required();
  online_cmd->add_option("--measure", online.measure,
                         "Ranking measure: ndcg, map or ndcg@K");
  online_cmd->add_option("--out", online.out_path, "Output model file")
      ->required();
  online_cmd->add_option("--log", online.log_path, "Per-round CSV log file");
  online_cmd->add_option("--bound-comparator", online.comparator,
                         "auto (final w) or a model/sidecar file");

  BatchArgs batch;
  auto* batch_cmd = app.add_subcommand(
      "train-batch", "Minimize the regularized empirical surrogate loss");
  batch_cmd->add_option("--data", batch.data_path, "Ranking data file")
      ->required();
  batch_cmd->add_option("--measure", batch.measure,
                        "Ranking measure: ndcg, map or ndcg@K");
  batch_cmd->add_option("--lambda", batch.lambda,
                        "Regularization weight or 'auto'");
  batch_cmd->add_option("--B", batch.ball_radius, "l2 ball radius for w");
  batch_cmd->add_option("--epochs", batch.epochs, "Training passes")
      ->check(CLI::PositiveNumber);
  batch_cmd->add_option("--out", batch.out_path, "Output model file")
      ->required();
  batch_cmd->add_option("--trace", batch.trace_path,
                        "Per-epoch objective CSV file");
  batch_cmd->add_option("--seed", batch.seed, "Shuffle seed");

  EvalArgs eval;
  auto* eval_cmd =
      app.add_subcommand("eval", "Evaluate a model on a ranking data file");
  eval_cmd->add_option("--data", eval.data_path, "Ranking data file")
      ->required();
  eval_cmd->add_option("--model", eval.model_path, "Model file")->required();
  eval_cmd->add_option("--measure", eval.measure,
                       "Override the model's measure tag");
  eval_cmd->add_flag("--per-query", eval.per_query,
                     "Print a per-query CSV (qid,metric,surrogate)");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand(
      "verify", "Run the brute-force verification suites");
  verify_cmd->add_option("--suite", verify.suite,
                         "bounds, subgradients, dominance, norms or all");
  verify_cmd->add_option("--trials", verify.trials, "Random trials per check")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", verify.seed, "Sampling seed");
  verify_cmd->add_option("--m-max", verify.m_max, "Max documents per query")
      ->check(CLI::Range(1, 8));
  verify_cmd
      ->add_option("--inject-weight-defect", verify.weight_defect,
                   "Shrink the first positive weight entry (negative control)")
      ->group("");  // hidden

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand(
      "analyze", "Profile the l1 norm of a surrogate's score gradient");
  analyze_cmd->add_option("--surrogate", analyze.surrogate,
                          "slam-ndcg, slam-map, ranksvm, listnet or "
                          "structmargin");
  analyze_cmd->add_option("--m-grid", analyze.m_grid,
                          "Comma-separated list sizes");
  analyze_cmd->add_option("--trials", analyze.trials,
                          "Random score draws per list size")
      ->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--out", analyze.out_path, "Output CSV file");
  analyze_cmd->add_option("--seed", analyze.seed, "Sampling seed");

  GenDataArgs gen;
  auto* gen_cmd = app.add_subcommand(
      "gen-data", "Generate synthetic (optionally margin-separable) data");
  gen_cmd->add_option("--n", gen.n, "Number of queries")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--m", gen.m, "Documents per query")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--d", gen.d, "Feature dimension")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--gamma", gen.gamma, "Separation margin (0 = none)");
  gen_cmd->add_option("--grades", gen.grades, "Comma-separated grade set");
  gen_cmd->add_option("--noise", gen.noise, "Off-axis noise fraction [0,1]");
  gen_cmd->add_option("--feature-norm", gen.feature_norm, "Target R_X");
  gen_cmd->add_option("--seed", gen.seed, "Generation seed");
  gen_cmd->add_option("--out", gen.out_path, "Output ranking file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitUsage;
  }

  if (online_cmd->parsed()) return guarded([&] { return run_train_online(online); });
  if (batch_cmd->parsed()) return guarded([&] { return run_train_batch(batch); });
  if (eval_cmd->parsed()) return guarded([&] { return run_eval(eval); });
  if (verify_cmd->parsed()) return guarded([&] { return run_verify(verify); });
  if (analyze_cmd->parsed()) return guarded([&] { return run_analyze(analyze); });
  if (gen_cmd->parsed()) return guarded([&] { return run_gen_data(gen); });
  return kExitUsage;
}
