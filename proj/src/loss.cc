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

#include "pnml/loss.h"

#include <algorithm>
#include <cmath>

#include "pnml/metric.h"

namespace pnml {

double stable_sigmoid(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double t = std::exp(s);
  return t / (1.0 + t);
}

double log_mean_exp_neg(const Vector& distances) {
  if (distances.size() == 0) throw DimensionError("empty prototype list");
  const double shift = distances.minCoeff();
  return -shift + std::log((-(distances.array() - shift)).exp().sum()) -
         std::log(static_cast<double>(distances.size()));
}

double predict_label_prob(const Vector& e, const LabelPrototypes& protos, const Matrix& u,
                          int distance_power) {
  if (protos.pos.rows() == 0 || protos.neg.rows() == 0) {
    throw DimensionError("prediction needs non-empty positive and negative prototype lists");
  }
  auto distances = [&](const Matrix& p) {
    Vector d(p.rows());
    for (Eigen::Index c = 0; c < p.rows(); ++c) {
      d(c) = label_divergence(u, e, p.row(c).transpose(), distance_power);
    }
    return d;
  };
  return stable_sigmoid(log_mean_exp_neg(distances(protos.pos)) -
                        log_mean_exp_neg(distances(protos.neg)));
}

double cross_entropy(const Matrix& probabilities, const LabelMatrix& labels) {
  if (probabilities.rows() != labels.rows() || probabilities.cols() != labels.cols()) {
    throw DimensionError("probability and label matrices differ in shape");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < probabilities.rows(); ++i) {
    for (Eigen::Index k = 0; k < probabilities.cols(); ++k) {
      const double p = std::clamp(probabilities(i, k), kProbabilityClamp, 1.0 - kProbabilityClamp);
      total -= labels(i, k) == 1 ? std::log(p) : std::log1p(-p);
    }
  }
  return total;
}

double correlation_regularizer(const PrototypeSet& protos, const CorrelationMatrix& corr) {
  const auto k_count = static_cast<Eigen::Index>(protos.labels.size());
  if (corr.c.rows() != k_count || corr.c.cols() != k_count) {
    throw DimensionError("correlation matrix does not match label count");
  }
  std::vector<Vector> means(protos.labels.size());
  for (Eigen::Index k = 0; k < k_count; ++k) {
    if (protos.labels[k].pos.rows() > 0) means[k] = single_prototype(protos.labels[k].pos);
  }
  double total = 0.0;
  for (Eigen::Index j = 0; j < k_count; ++j) {
    if (means[j].size() == 0) continue;
    for (Eigen::Index k = 0; k < k_count; ++k) {
      if (means[k].size() == 0) continue;
      total += (1.0 - corr.c(j, k)) * means[j].dot(means[k]);
    }
  }
  return 0.5 * total;
}

double total_loss(double cross_entropy, double metric, double correlation, double lambda1,
                  double lambda2) {
  return cross_entropy + lambda1 * metric + lambda2 * correlation;
}

LossBreakdown make_breakdown(double cross_entropy, double metric, double correlation,
                             double lambda1, double lambda2) {
  return {cross_entropy, metric, correlation,
          total_loss(cross_entropy, metric, correlation, lambda1, lambda2), lambda1, lambda2};
}

Eigen::VectorXi predict_labels(const Vector& probabilities, double threshold) {
  return (probabilities.array() > threshold).cast<int>().matrix();
}

}  // namespace pnml
