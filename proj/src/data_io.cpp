#include "slamrank/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "slamrank/ranking_metrics.hpp"

namespace slamrank {

namespace {

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool parse_int(std::string_view token, int& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

bool parse_double(std::string_view token, double& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

struct RawDocument {
  int grade = 0;
  std::vector<std::pair<int, double>> features;  // 1-based indices
};

struct RawQuery {
  std::string qid;
  std::vector<RawDocument> docs;
};

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

DatasetStats dataset_stats(const Dataset& ds) {
  DatasetStats stats;
  for (const QueryInstance& q : ds.queries) {
    if (q.num_docs == 0) continue;  // empty queries carry no statistics
    ++stats.num_queries;
    stats.num_features = std::max(stats.num_features, q.num_features);
    stats.max_docs = std::max(stats.max_docs, q.num_docs);
    stats.max_row_norm = std::max(stats.max_row_norm, q.max_row_norm());
    for (int g : q.relevance) ++stats.grade_histogram[g];
  }
  return stats;
}

Dataset parse_ranking_file(std::istream& in, int max_grade) {
  std::vector<RawQuery> raw;
  int max_index = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream tokens(line);
    std::string token;
    if (!(tokens >> token)) continue;  // blank or comment-only line

    RawDocument doc;
    if (!parse_int(token, doc.grade)) {
      throw ParseError("non-integer grade '" + token + "'", line_no);
    }
    if (doc.grade < 0 || doc.grade > max_grade) {
      throw ParseError("grade " + std::to_string(doc.grade) +
                           " outside [0, " + std::to_string(max_grade) + "]",
                       line_no);
    }
    if (!(tokens >> token) || token.rfind("qid:", 0) != 0 ||
        token.size() == 4) {
      throw ParseError("expected qid:<id> after grade", line_no);
    }
    const std::string qid = token.substr(4);

    int prev_index = 0;
    while (tokens >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) {
        throw ParseError("malformed feature token '" + token + "'", line_no);
      }
      int index = 0;
      double value = 0.0;
      if (!parse_int(token.substr(0, colon), index) ||
          !parse_double(token.substr(colon + 1), value)) {
        throw ParseError("malformed feature token '" + token + "'", line_no);
      }
      if (index < 1) {
        throw ParseError("feature indices are 1-based", line_no);
      }
      if (index <= prev_index) {
        throw ParseError("feature indices must be strictly increasing",
                         line_no);
      }
      if (!std::isfinite(value)) {
        throw ParseError("non-finite feature value", line_no);
      }
      prev_index = index;
      max_index = std::max(max_index, index);
      doc.features.emplace_back(index, value);
    }

    if (raw.empty() || raw.back().qid != qid) {
      raw.push_back({qid, {}});
    }
    raw.back().docs.push_back(std::move(doc));
  }
  if (raw.empty()) {
    throw EmptyDatasetError("empty dataset: no instances found");
  }
  if (max_index == 0) {
    throw ParseError("no feature indices found in input", line_no);
  }

  Dataset ds;
  ds.queries.reserve(raw.size());
  for (RawQuery& rq : raw) {
    QueryInstance q;
    q.qid = std::move(rq.qid);
    q.num_docs = static_cast<int>(rq.docs.size());
    q.num_features = max_index;
    q.features.assign(
        static_cast<std::size_t>(q.num_docs) * max_index, 0.0);
    q.relevance.resize(q.num_docs);
    for (int i = 0; i < q.num_docs; ++i) {
      q.relevance[i] = rq.docs[i].grade;
      for (const auto& [index, value] : rq.docs[i].features) {
        q.features[static_cast<std::size_t>(i) * max_index + index - 1] =
            value;
      }
    }
    ds.queries.push_back(std::move(q));
  }
  ds.stats = dataset_stats(ds);
  return ds;
}

Dataset parse_ranking_file(const std::filesystem::path& path, int max_grade) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError("cannot open ranking file: " + path.string());
  }
  return parse_ranking_file(in, max_grade);
}

std::string serialize_ranking_file(const Dataset& ds) {
  std::ostringstream out;
  for (const QueryInstance& q : ds.queries) {
    for (int i = 0; i < q.num_docs; ++i) {
      out << q.relevance[i] << " qid:" << q.qid;
      const auto row = q.row(i);
      for (int f = 0; f < q.num_features; ++f) {
        out << ' ' << (f + 1) << ':' << format_double(row[f]);
      }
      out << '\n';
    }
  }
  return out.str();
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  if (spec.num_queries < 1 || spec.num_docs < 1 || spec.num_features < 1) {
    throw InvalidArgumentError("synthetic spec sizes must be positive");
  }
  if (spec.gamma < 0.0 || spec.noise < 0.0 || spec.noise > 1.0 ||
      spec.feature_norm <= 0.0) {
    throw InvalidArgumentError(
        "synthetic spec requires gamma >= 0, noise in [0,1], feature_norm > 0");
  }
  std::set<int> grade_set(spec.grades.begin(), spec.grades.end());
  if (grade_set.empty()) {
    throw InvalidArgumentError("grade set must be nonempty");
  }
  for (int g : grade_set) {
    if (g < 0 || g > kGradeLimit) {
      throw InvalidArgumentError("grades must be in [0, " +
                                 std::to_string(kGradeLimit) + "]");
    }
  }
  if (spec.gamma > 0.0 && spec.num_docs < 2) {
    throw InvalidArgumentError("margin construction needs m >= 2");
  }
  if (spec.gamma > 0.0 && grade_set.size() < 2) {
    throw InvalidArgumentError(
        "margin construction needs at least two grade levels");
  }
  const std::vector<int> grades(grade_set.begin(), grade_set.end());
  // Small headroom so the certificate min-margin stays >= gamma under every
  // floating-point evaluation order.
  const double gamma_eff = spec.gamma * (1.0 + 1e-9);
  const double grade_mid =
      0.5 * (static_cast<double>(grades.front()) + grades.back());
  const double half_span = (grades.back() - grade_mid) * gamma_eff;
  if (spec.gamma > 0.0 && half_span > spec.feature_norm) {
    throw InvalidArgumentError(
        "margin construction infeasible: grade span times gamma exceeds the "
        "feature norm budget");
  }

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> grade_pick(0, grades.size() - 1);

  const int d = spec.num_features;
  std::vector<double> u(d);
  double u_norm = 0.0;
  while (u_norm < 1e-9) {
    for (double& x : u) x = normal(rng);
    u_norm = l2_norm(u);
  }
  for (double& x : u) x /= u_norm;

  Dataset ds;
  ds.queries.reserve(spec.num_queries);
  for (long long qi = 0; qi < spec.num_queries; ++qi) {
    QueryInstance q;
    q.qid = std::to_string(qi + 1);
    q.num_docs = spec.num_docs;
    q.num_features = d;
    q.features.resize(static_cast<std::size_t>(spec.num_docs) * d);
    q.relevance.resize(spec.num_docs);
    for (int i = 0; i < spec.num_docs; ++i) {
      q.relevance[i] = grades[grade_pick(rng)];
      std::vector<double> z(d);
      for (double& x : z) x = normal(rng);
      double* row = q.features.data() + static_cast<std::size_t>(i) * d;
      if (spec.gamma > 0.0) {
        const double c = (q.relevance[i] - grade_mid) * gamma_eff;
        const double zu = dot(z, u);
        for (int f = 0; f < d; ++f) z[f] -= zu * u[f];
        const double orth_norm = l2_norm(z);
        const double budget =
            spec.noise *
            std::sqrt(std::max(
                spec.feature_norm * spec.feature_norm - c * c, 0.0));
        const double scale = orth_norm > 1e-12 ? budget / orth_norm : 0.0;
        for (int f = 0; f < d; ++f) {
          row[f] = c * u[f] + scale * z[f];
        }
      } else {
        for (int f = 0; f < d; ++f) row[f] = z[f];
      }
    }
    ds.queries.push_back(std::move(q));
  }

  if (spec.gamma == 0.0) {
    double max_norm = 0.0;
    for (const QueryInstance& q : ds.queries) {
      max_norm = std::max(max_norm, q.max_row_norm());
    }
    if (max_norm > 0.0) {
      const double scale = spec.feature_norm / max_norm;
      for (QueryInstance& q : ds.queries) {
        for (double& x : q.features) x *= scale;
      }
    }
  }

  SyntheticData out;
  out.u_star = u;
  if (spec.gamma > 0.0) {
    // Certify the margin from the stored features, pair by pair, the same
    // way any evaluator will see them.
    double min_gap = std::numeric_limits<double>::infinity();
    for (const QueryInstance& q : ds.queries) {
      std::vector<double> proj(q.num_docs);
      for (int i = 0; i < q.num_docs; ++i) proj[i] = dot(q.row(i), u);
      for (int i = 0; i < q.num_docs; ++i) {
        for (int j = 0; j < q.num_docs; ++j) {
          if (q.relevance[i] > q.relevance[j]) {
            min_gap = std::min(min_gap, proj[i] - proj[j]);
          }
        }
      }
    }
    out.gamma_realized = std::isfinite(min_gap)
                             ? min_gap * (1.0 - 1e-12)
                             : gamma_eff;
  }
  ds.stats = dataset_stats(ds);
  out.data = std::move(ds);
  return out;
}

void save_model(const std::filesystem::path& path, const ModelFile& model) {
  if (model.w.empty()) {
    throw InvalidArgumentError("model parameter vector is empty");
  }
  std::ofstream out(path);
  if (!out) {
    throw FormatError("cannot open model file for writing: " + path.string());
  }
  out << "slamrank-model v1\n";
  out << model.w.size() << "\n";
  out << model.measure.tag() << ' ' << format_double(model.delta) << "\n";
  for (std::size_t i = 0; i < model.w.size(); ++i) {
    out << (i ? " " : "") << format_double(model.w[i]);
  }
  out << "\n";
  if (!out) {
    throw FormatError("failed writing model file: " + path.string());
  }
}

namespace {

std::string read_line_or_throw(std::istream& in, const std::string& what) {
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError("truncated file: missing " + what);
  }
  strip_cr(line);
  return line;
}

}  // namespace

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError("cannot open model file: " + path.string());
  }
  if (read_line_or_throw(in, "header") != "slamrank-model v1") {
    throw FormatError("model header mismatch: expected 'slamrank-model v1'");
  }
  int d = 0;
  if (!parse_int(read_line_or_throw(in, "dimension"), d) || d < 1) {
    throw FormatError("model dimension must be a positive integer");
  }
  std::istringstream meta(read_line_or_throw(in, "measure line"));
  std::string tag;
  std::string delta_token;
  if (!(meta >> tag >> delta_token)) {
    throw FormatError("model measure line must be '<measure> <delta>'");
  }
  ModelFile model;
  try {
    model.measure = RankingMeasure::from_tag(tag);
  } catch (const InvalidArgumentError& err) {
    throw FormatError(err.what());
  }
  if (!parse_double(delta_token, model.delta) || !(model.delta > 0.0)) {
    throw FormatError("model delta must be a positive number");
  }
  std::istringstream values(read_line_or_throw(in, "parameter values"));
  std::string token;
  while (values >> token) {
    double x = 0.0;
    if (!parse_double(token, x) || !std::isfinite(x)) {
      throw FormatError("non-numeric model parameter '" + token + "'");
    }
    model.w.push_back(x);
  }
  if (static_cast<int>(model.w.size()) != d) {
    throw FormatError("model parameter count " +
                      std::to_string(model.w.size()) +
                      " does not match declared dimension " +
                      std::to_string(d));
  }
  return model;
}

void save_sidecar(const std::filesystem::path& path,
                  const std::vector<double>& u_star, double gamma_realized) {
  std::ofstream out(path);
  if (!out) {
    throw FormatError("cannot open sidecar file for writing: " +
                      path.string());
  }
  out << "slamrank-sidecar v1\n";
  out << u_star.size() << "\n";
  out << format_double(gamma_realized) << "\n";
  for (std::size_t i = 0; i < u_star.size(); ++i) {
    out << (i ? " " : "") << format_double(u_star[i]);
  }
  out << "\n";
  if (!out) {
    throw FormatError("failed writing sidecar file: " + path.string());
  }
}

Sidecar load_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError("cannot open sidecar file: " + path.string());
  }
  if (read_line_or_throw(in, "header") != "slamrank-sidecar v1") {
    throw FormatError("sidecar header mismatch: expected 'slamrank-sidecar v1'");
  }
  int d = 0;
  if (!parse_int(read_line_or_throw(in, "dimension"), d) || d < 1) {
    throw FormatError("sidecar dimension must be a positive integer");
  }
  Sidecar sidecar;
  if (!parse_double(read_line_or_throw(in, "gamma"), sidecar.gamma_realized)) {
    throw FormatError("sidecar gamma must be numeric");
  }
  std::istringstream values(read_line_or_throw(in, "u_star values"));
  std::string token;
  while (values >> token) {
    double x = 0.0;
    if (!parse_double(token, x) || !std::isfinite(x)) {
      throw FormatError("non-numeric sidecar value '" + token + "'");
    }
    sidecar.u_star.push_back(x);
  }
  if (static_cast<int>(sidecar.u_star.size()) != d) {
    throw FormatError("sidecar value count does not match declared dimension");
  }
  return sidecar;
}

}  // namespace slamrank
