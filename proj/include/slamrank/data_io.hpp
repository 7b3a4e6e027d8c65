#ifndef SLAMRANK_DATA_IO_HPP_
#define SLAMRANK_DATA_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "slamrank/types.hpp"

// Ranking-file parsing, synthetic (optionally margin-separable) data
// generation, dataset statistics and model persistence.
//
// Ranking file line format (1-based, strictly increasing feature indices):
//   <grade> qid:<id> <idx>:<val> ... [# comment]
// Queries are contiguous runs of equal qid; missing indices default to 0.

namespace slamrank {

struct DatasetStats {
  long long num_queries = 0;
  int num_features = 0;
  int max_docs = 0;
  double max_row_norm = 0.0;  // R_X
  std::map<int, long long> grade_histogram;
};

struct Dataset {
  std::vector<QueryInstance> queries;
  DatasetStats stats;
};

DatasetStats dataset_stats(const Dataset& ds);

Dataset parse_ranking_file(std::istream& in, int max_grade = kDefaultMaxGrade);
Dataset parse_ranking_file(const std::filesystem::path& path,
                           int max_grade = kDefaultMaxGrade);

// Dense text form; parses back to an identical dataset.
std::string serialize_ranking_file(const Dataset& ds);

struct SyntheticSpec {
  long long num_queries = 1;
  int num_docs = 2;
  int num_features = 2;
  double gamma = 0.0;        // > 0: higher grades outscore lower ones under
                             // u_star by at least gamma
  std::vector<int> grades = {0, 1};
  double noise = 1.0;        // fraction of the norm budget spent off-axis
  std::uint64_t seed = 1;
  double feature_norm = 1.0; // target R_X
};

struct SyntheticData {
  Dataset data;
  std::vector<double> u_star;
  double gamma_realized = 0.0;
};

// Draws a unit comparator u_star, places each document's u_star component at
// grade * gamma (with a hair of headroom) and fills the orthogonal complement
// with seeded noise. The returned margin is the post-generation minimum of
// score differences over orderable pairs, shaved by one part in 1e12 so the
// certificate f_t(u_star / gamma_realized) = 0 holds under every evaluation
// order.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

struct ModelFile {
  std::vector<double> w;
  RankingMeasure measure;
  double delta = 1.0;
};

void save_model(const std::filesystem::path& path, const ModelFile& model);
ModelFile load_model(const std::filesystem::path& path);

void save_sidecar(const std::filesystem::path& path,
                  const std::vector<double>& u_star, double gamma_realized);
struct Sidecar {
  std::vector<double> u_star;
  double gamma_realized = 0.0;
};
Sidecar load_sidecar(const std::filesystem::path& path);

// Shortest decimal form that round-trips the double exactly.
std::string format_double(double x);

}  // namespace slamrank

#endif  // SLAMRANK_DATA_IO_HPP_
