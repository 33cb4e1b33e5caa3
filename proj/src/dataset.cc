/*
 * Copyright 2026 The PNML Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pnml/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string_view>

#include "pnml/random.h"

namespace pnml {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view token, std::size_t line) {
  token = trim(token);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("invalid number '" + std::string(token) + "'", line);
  }
  if (!std::isfinite(value)) throw ParseError("non-finite value '" + std::string(token) + "'", line);
  return value;
}

long long parse_int(std::string_view token, std::size_t line) {
  token = trim(token);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("invalid integer '" + std::string(token) + "'", line);
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) parts.push_back(s.substr(i, j - i));
    i = j;
  }
  return parts;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'", 0);
  return in;
}

std::vector<std::vector<double>> read_csv_rows(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    for (auto cell : split(line, ',')) row.push_back(parse_double(cell, line_no));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DimensionError("line " + std::to_string(line_no) + ": expected " +
                           std::to_string(rows.front().size()) + " columns, found " +
                           std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Dataset::Dataset(Matrix features, LabelMatrix labels, std::vector<std::string> feature_names,
                 std::vector<std::string> label_names)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      feature_names_(std::move(feature_names)),
      label_names_(std::move(label_names)) {
  if (features_.rows() < 1 || features_.cols() < 1 || labels_.cols() < 1) {
    throw DimensionError("dataset needs N >= 1, D >= 1, K >= 1");
  }
  if (features_.rows() != labels_.rows()) {
    throw DimensionError("feature rows (" + std::to_string(features_.rows()) +
                         ") differ from label rows (" + std::to_string(labels_.rows()) + ")");
  }
  if (!features_.allFinite()) throw DimensionError("features contain NaN or Inf");
  if ((labels_.array() != 0 && labels_.array() != 1).any()) {
    throw DimensionError("label entries must be 0 or 1");
  }
  if (!feature_names_.empty() && static_cast<Eigen::Index>(feature_names_.size()) != features_.cols()) {
    throw DimensionError("feature name count does not match D");
  }
  if (!label_names_.empty() && static_cast<Eigen::Index>(label_names_.size()) != labels_.cols()) {
    throw DimensionError("label name count does not match K");
  }
}

IndexList Dataset::positives(Eigen::Index k) const {
  IndexList rows;
  for (Eigen::Index i = 0; i < labels_.rows(); ++i) {
    if (labels_(i, k) == 1) rows.push_back(i);
  }
  return rows;
}

IndexList Dataset::negatives(Eigen::Index k) const {
  IndexList rows;
  for (Eigen::Index i = 0; i < labels_.rows(); ++i) {
    if (labels_(i, k) == 0) rows.push_back(i);
  }
  return rows;
}

Dataset Dataset::subset(const IndexList& rows) const {
  Matrix x(static_cast<Eigen::Index>(rows.size()), features_.cols());
  LabelMatrix y(static_cast<Eigen::Index>(rows.size()), labels_.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    x.row(static_cast<Eigen::Index>(r)) = features_.row(rows[r]);
    y.row(static_cast<Eigen::Index>(r)) = labels_.row(rows[r]);
  }
  return Dataset(std::move(x), std::move(y), feature_names_, label_names_);
}

Dataset Dataset::with_features(Matrix features) const {
  return Dataset(std::move(features), labels_, feature_names_, label_names_);
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.features_.rows() == b.features_.rows() && a.features_.cols() == b.features_.cols() &&
         a.labels_.cols() == b.labels_.cols() && a.features_ == b.features_ && a.labels_ == b.labels_;
}

DataFormat parse_data_format(const std::string& name) {
  if (name == "sparse-multilabel" || name == "sparse") return DataFormat::kSparseMultilabel;
  if (name == "dense-csv-pair" || name == "csv") return DataFormat::kDenseCsvPair;
  throw ConfigError("unknown data format '" + name + "'");
}

std::string to_string(DataFormat format) {
  return format == DataFormat::kSparseMultilabel ? "sparse-multilabel" : "dense-csv-pair";
}

Dataset load_sparse(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  const auto header = split_ws(line);
  if (header.size() != 3) throw ParseError("header must be 'N D K'", line_no);
  const long long n = parse_int(header[0], line_no);
  const long long d = parse_int(header[1], line_no);
  const long long k = parse_int(header[2], line_no);
  if (n < 1 || d < 1 || k < 1) throw ParseError("header values must be positive", line_no);

  Matrix x = Matrix::Zero(n, d);
  LabelMatrix y = LabelMatrix::Zero(n, k);
  long long row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (row >= n) {
      if (body.empty()) continue;
      throw DimensionError("line " + std::to_string(line_no) + ": more records than the declared N=" +
                           std::to_string(n));
    }
    auto tokens = split_ws(body);
    std::size_t first_feature = 0;
    if (!tokens.empty() && tokens[0].find(':') == std::string_view::npos) {
      for (auto label : split(tokens[0], ',')) {
        if (trim(label).empty()) continue;
        const long long l = parse_int(label, line_no);
        if (l < 1 || l > k) {
          throw DimensionError("line " + std::to_string(line_no) + ": label index " +
                               std::to_string(l) + " outside 1.." + std::to_string(k));
        }
        y(row, l - 1) = 1;
      }
      first_feature = 1;
    }
    for (std::size_t t = first_feature; t < tokens.size(); ++t) {
      const auto colon = tokens[t].find(':');
      if (colon == std::string_view::npos) {
        throw ParseError("expected index:value, got '" + std::string(tokens[t]) + "'", line_no);
      }
      const long long j = parse_int(tokens[t].substr(0, colon), line_no);
      if (j < 1 || j > d) {
        throw DimensionError("line " + std::to_string(line_no) + ": feature index " +
                             std::to_string(j) + " outside 1.." + std::to_string(d));
      }
      x(row, j - 1) = parse_double(tokens[t].substr(colon + 1), line_no);
    }
    ++row;
  }
  if (row != n) {
    throw DimensionError("found " + std::to_string(row) + " records, header declares N=" +
                         std::to_string(n));
  }
  return Dataset(std::move(x), std::move(y));
}

Dataset load_sparse(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return load_sparse(in);
}

void save_sparse(const Dataset& ds, std::ostream& out) {
  out << ds.rows() << ' ' << ds.num_features() << ' ' << ds.num_labels() << '\n';
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < ds.rows(); ++i) {
    bool first = true;
    for (Eigen::Index k = 0; k < ds.num_labels(); ++k) {
      if (ds.labels()(i, k) != 1) continue;
      out << (first ? "" : ",") << (k + 1);
      first = false;
    }
    for (Eigen::Index j = 0; j < ds.num_features(); ++j) {
      const double v = ds.features()(i, j);
      if (v != 0.0) out << ' ' << (j + 1) << ':' << v;
    }
    out << '\n';
  }
}

Dataset load_csv_pair(std::istream& features, std::istream& labels) {
  const auto xr = read_csv_rows(features);
  const auto yr = read_csv_rows(labels);
  if (xr.empty() || yr.empty()) throw ParseError("empty feature or label file", 0);
  if (xr.size() != yr.size()) {
    throw DimensionError("features have " + std::to_string(xr.size()) + " rows, labels have " +
                         std::to_string(yr.size()));
  }
  const auto n = static_cast<Eigen::Index>(xr.size());
  Matrix x(n, static_cast<Eigen::Index>(xr.front().size()));
  LabelMatrix y(n, static_cast<Eigen::Index>(yr.front().size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = xr[i][j];
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
      const double v = yr[i][j];
      if (v != 0.0 && v != 1.0) {
        throw ParseError("label value " + std::to_string(v) + " outside {0,1}",
                         static_cast<std::size_t>(i + 1));
      }
      y(i, j) = static_cast<int>(v);
    }
  }
  return Dataset(std::move(x), std::move(y));
}

Dataset load_csv_pair(const std::filesystem::path& features, const std::filesystem::path& labels) {
  auto fx = open_or_throw(features);
  auto fy = open_or_throw(labels);
  return load_csv_pair(fx, fy);
}

Dataset load_dataset(const std::filesystem::path& path, DataFormat format) {
  if (format == DataFormat::kSparseMultilabel) return load_sparse(path);
  return load_csv_pair(path / "features.csv", path / "labels.csv");
}

std::vector<IndexList> kfold_test_indices(Eigen::Index rows, int folds, std::uint64_t seed) {
  if (folds < 2 || folds > rows) {
    throw ConfigError("folds must lie in [2, N]; got " + std::to_string(folds) + " with N=" +
                      std::to_string(rows));
  }
  IndexList order(static_cast<std::size_t>(rows));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Rng rng(seed);
  rng.shuffle(order);

  std::vector<IndexList> out(static_cast<std::size_t>(folds));
  const Eigen::Index base = rows / folds;
  const Eigen::Index extra = rows % folds;
  Eigen::Index cursor = 0;
  for (int f = 0; f < folds; ++f) {
    const Eigen::Index size = base + (f < extra ? 1 : 0);
    out[f].assign(order.begin() + cursor, order.begin() + cursor + size);
    std::sort(out[f].begin(), out[f].end());
    cursor += size;
  }
  return out;
}

std::vector<FoldSplit> kfold_split(const Dataset& ds, int folds, std::uint64_t seed) {
  const auto tests = kfold_test_indices(ds.rows(), folds, seed);
  std::vector<FoldSplit> splits;
  splits.reserve(tests.size());
  for (const auto& test_rows : tests) {
    std::vector<bool> in_test(static_cast<std::size_t>(ds.rows()), false);
    for (auto r : test_rows) in_test[r] = true;
    IndexList train_rows;
    for (Eigen::Index r = 0; r < ds.rows(); ++r) {
      if (!in_test[r]) train_rows.push_back(r);
    }
    FoldSplit split{train_rows, test_rows, ds.subset(train_rows), ds.subset(test_rows)};
    splits.push_back(std::move(split));
  }
  return splits;
}

Eigen::Index sample_count(Eigen::Index available, double rate) {
  if (available <= 0) return 0;
  // The epsilon keeps products like 0.1 * 30 = 3.0000000000000004 at 3.
  auto count = static_cast<Eigen::Index>(std::ceil(rate * static_cast<double>(available) - 1e-9));
  return std::clamp<Eigen::Index>(count, 1, available);
}

IndexList sample_without_replacement(const IndexList& pool, double rate, std::uint64_t seed) {
  if (!(rate > 0.0 && rate <= 1.0)) {
    throw ConfigError("sampling rate must lie in (0, 1]; got " + std::to_string(rate));
  }
  const auto n = static_cast<Eigen::Index>(pool.size());
  const Eigen::Index take = sample_count(n, rate);
  IndexList out = pool;
  if (take < n) {
    Rng rng(seed);
    for (Eigen::Index i = 0; i < take; ++i) {
      const auto j = i + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n - i)));
      std::swap(out[i], out[j]);
    }
    out.resize(static_cast<std::size_t>(take));
  }
  std::sort(out.begin(), out.end());
  return out;
}

LabelSample sample_label_instances(const Dataset& ds, Eigen::Index k, const SamplingConfig& cfg) {
  if (k < 0 || k >= ds.num_labels()) {
    throw DimensionError("label index " + std::to_string(k) + " out of range");
  }
  return {sample_without_replacement(ds.positives(k), cfg.r_pos, derive_seed(cfg.seed, "pos", k)),
          sample_without_replacement(ds.negatives(k), cfg.r_neg, derive_seed(cfg.seed, "neg", k))};
}

CorrelationMatrix label_correlation_matrix(const Dataset& ds) {
  const Eigen::Index k = ds.num_labels();
  const Matrix y = ds.labels().cast<double>();
  const RowVector mean = y.colwise().mean();
  const Matrix centered = y.rowwise() - mean;
  const Vector ss = centered.colwise().squaredNorm().transpose();

  Matrix c = Matrix::Zero(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    c(a, a) = 1.0;
    for (Eigen::Index b = a + 1; b < k; ++b) {
      double r = 0.0;
      if (ss(a) > 0.0 && ss(b) > 0.0) {
        r = centered.col(a).dot(centered.col(b)) / std::sqrt(ss(a) * ss(b));
        r = std::clamp(r, -1.0, 1.0);
      }
      c(a, b) = r;
      c(b, a) = r;
    }
  }
  return {c};
}

}  // namespace pnml
