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

#include "pnml/eval.h"

#include <algorithm>
#include <vector>

namespace pnml {
namespace {

void check_same_shape(Eigen::Index r1, Eigen::Index c1, Eigen::Index r2, Eigen::Index c2) {
  if (r1 != r2 || c1 != c2) throw DimensionError("prediction and truth matrices differ in shape");
}

double f1(long tp, long fp, long fn) {
  const long denom = 2 * tp + fp + fn;
  return denom == 0 ? 1.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

}  // namespace

double accuracy(const LabelMatrix& pred, const LabelMatrix& truth) {
  check_same_shape(pred.rows(), pred.cols(), truth.rows(), truth.cols());
  if (pred.rows() == 0) return 1.0;
  double total = 0.0;
  for (Eigen::Index i = 0; i < pred.rows(); ++i) {
    const long inter = (pred.row(i).array() * truth.row(i).array()).sum();
    const long uni = (pred.row(i).array() + truth.row(i).array() > 0).count();
    total += uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
  }
  return total / static_cast<double>(pred.rows());
}

double micro_f1(const LabelMatrix& pred, const LabelMatrix& truth) {
  check_same_shape(pred.rows(), pred.cols(), truth.rows(), truth.cols());
  const long tp = (pred.array() * truth.array()).sum();
  const long fp = (pred.array() * (1 - truth.array())).sum();
  const long fn = ((1 - pred.array()) * truth.array()).sum();
  return f1(tp, fp, fn);
}

double macro_f1(const LabelMatrix& pred, const LabelMatrix& truth) {
  check_same_shape(pred.rows(), pred.cols(), truth.rows(), truth.cols());
  double total = 0.0;
  for (Eigen::Index k = 0; k < pred.cols(); ++k) {
    const auto p = pred.col(k).array();
    const auto t = truth.col(k).array();
    total += f1((p * t).sum(), (p * (1 - t)).sum(), ((1 - p) * t).sum());
  }
  return total / static_cast<double>(pred.cols());
}

double average_precision(const Matrix& scores, const LabelMatrix& truth) {
  check_same_shape(scores.rows(), scores.cols(), truth.rows(), truth.cols());
  const Eigen::Index k_count = scores.cols();
  std::vector<double> all;
  std::vector<double> relevant_scores;
  double total = 0.0;
  long counted = 0;
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    const long relevant = truth.row(i).sum();
    if (relevant == 0 || relevant == k_count) continue;
    all.clear();
    relevant_scores.clear();
    for (Eigen::Index k = 0; k < k_count; ++k) {
      all.push_back(scores(i, k));
      if (truth(i, k) == 1) relevant_scores.push_back(scores(i, k));
    }
    std::sort(all.begin(), all.end());
    std::sort(relevant_scores.begin(), relevant_scores.end());
    // Rank of a label is the number of labels scoring >= it, so tied labels
    // share the worst position.
    double sum = 0.0;
    for (Eigen::Index k = 0; k < k_count; ++k) {
      if (truth(i, k) != 1) continue;
      const double s = scores(i, k);
      const auto rank = all.end() - std::lower_bound(all.begin(), all.end(), s);
      const auto above = relevant_scores.end() - std::lower_bound(relevant_scores.begin(), relevant_scores.end(), s);
      sum += static_cast<double>(above) / static_cast<double>(rank);
    }
    total += sum / static_cast<double>(relevant);
    ++counted;
  }
  return counted == 0 ? 1.0 : total / static_cast<double>(counted);
}

double ranking_loss(const Matrix& scores, const LabelMatrix& truth) {
  check_same_shape(scores.rows(), scores.cols(), truth.rows(), truth.cols());
  double total = 0.0;
  long counted = 0;
  std::vector<double> irrelevant;
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    irrelevant.clear();
    for (Eigen::Index k = 0; k < scores.cols(); ++k) {
      if (truth(i, k) == 0) irrelevant.push_back(scores(i, k));
    }
    const auto n_irr = static_cast<long>(irrelevant.size());
    const long n_rel = static_cast<long>(scores.cols()) - n_irr;
    if (n_rel == 0 || n_irr == 0) continue;
    std::sort(irrelevant.begin(), irrelevant.end());
    long violations = 0;
    for (Eigen::Index k = 0; k < scores.cols(); ++k) {
      if (truth(i, k) == 0) continue;
      // Irrelevant labels scoring >= this relevant label.
      violations += irrelevant.end() - std::lower_bound(irrelevant.begin(), irrelevant.end(), scores(i, k));
    }
    total += static_cast<double>(violations) / static_cast<double>(n_rel * n_irr);
    ++counted;
  }
  return counted == 0 ? 0.0 : total / static_cast<double>(counted);
}

MetricValues evaluate(const Matrix& scores, const LabelMatrix& truth, double threshold) {
  const LabelMatrix pred = (scores.array() > threshold).cast<int>().matrix();
  return {accuracy(pred, truth), macro_f1(pred, truth), micro_f1(pred, truth),
          average_precision(scores, truth), ranking_loss(scores, truth)};
}

MetricValues mean_of(const std::vector<MetricValues>& folds) {
  MetricValues m;
  if (folds.empty()) return m;
  for (const auto& f : folds) {
    m.accuracy += f.accuracy;
    m.macro_f1 += f.macro_f1;
    m.micro_f1 += f.micro_f1;
    m.average_precision += f.average_precision;
    m.ranking_loss += f.ranking_loss;
  }
  const double n = static_cast<double>(folds.size());
  return {m.accuracy / n, m.macro_f1 / n, m.micro_f1 / n, m.average_precision / n, m.ranking_loss / n};
}

}  // namespace pnml
