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

#ifndef PNML_DATASET_H_
#define PNML_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pnml/types.h"

namespace pnml {

using LabelMatrix = Eigen::MatrixXi;

// N x D real features paired with an N x K binary label matrix. Immutable
// once constructed; the constructor enforces the invariants.
class Dataset {
 public:
  Dataset() = default;
  Dataset(Matrix features, LabelMatrix labels, std::vector<std::string> feature_names = {},
          std::vector<std::string> label_names = {});

  Eigen::Index rows() const { return features_.rows(); }
  Eigen::Index num_features() const { return features_.cols(); }
  Eigen::Index num_labels() const { return labels_.cols(); }

  const Matrix& features() const { return features_; }
  const LabelMatrix& labels() const { return labels_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<std::string>& label_names() const { return label_names_; }

  // Row indices carrying / not carrying label k, ascending.
  IndexList positives(Eigen::Index k) const;
  IndexList negatives(Eigen::Index k) const;

  Dataset subset(const IndexList& rows) const;

  // Same rows and labels with features replaced (e.g. after standardization).
  Dataset with_features(Matrix features) const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  Matrix features_;
  LabelMatrix labels_;
  std::vector<std::string> feature_names_;
  std::vector<std::string> label_names_;
};

enum class DataFormat { kSparseMultilabel, kDenseCsvPair };

DataFormat parse_data_format(const std::string& name);
std::string to_string(DataFormat format);

// Sparse multi-label text: header "N D K", then one record per line,
// "l1,l2,... i:v i:v ..." with 1-based label and feature indices.
Dataset load_sparse(std::istream& in);
Dataset load_sparse(const std::filesystem::path& path);
void save_sparse(const Dataset& ds, std::ostream& out);

// Dense pair: features.csv (N x D) and labels.csv (N x K of 0/1), no header.
Dataset load_csv_pair(std::istream& features, std::istream& labels);
Dataset load_csv_pair(const std::filesystem::path& features, const std::filesystem::path& labels);

// For kDenseCsvPair, `path` is a directory holding features.csv and labels.csv.
Dataset load_dataset(const std::filesystem::path& path, DataFormat format);

struct FoldSplit {
  IndexList train_rows;
  IndexList test_rows;
  Dataset train;
  Dataset test;
};

// Shuffled, balanced partition of row indices: the first N % folds test
// folds get one extra row.
std::vector<IndexList> kfold_test_indices(Eigen::Index rows, int folds, std::uint64_t seed);
std::vector<FoldSplit> kfold_split(const Dataset& ds, int folds, std::uint64_t seed);

struct SamplingConfig {
  double r_pos = 1.0;
  double r_neg = 1.0;
  std::uint64_t seed = 0;
};

struct LabelSample {
  IndexList pos;
  IndexList neg;
};

// Number kept when sampling `available` items at `rate`: ceil(rate * n),
// at least one whenever n >= 1.
Eigen::Index sample_count(Eigen::Index available, double rate);

// Draws sample_count(pool.size(), rate) distinct entries of `pool`, returned
// in ascending order.
IndexList sample_without_replacement(const IndexList& pool, double rate, std::uint64_t seed);

LabelSample sample_label_instances(const Dataset& ds, Eigen::Index k, const SamplingConfig& cfg);

struct CorrelationMatrix {
  Matrix c;
};

// Pearson correlation between label columns. Zero-variance columns get 0
// off the diagonal; the diagonal is always 1.
CorrelationMatrix label_correlation_matrix(const Dataset& ds);

}  // namespace pnml

#endif  // PNML_DATASET_H_
