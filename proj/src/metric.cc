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

#include "pnml/metric.h"

#include <cmath>
#include <string>

namespace pnml {
namespace {

void check_shapes(const Matrix& u, const Vector& e, const Vector& mu) {
  if (u.rows() != u.cols() || u.cols() != e.size() || e.size() != mu.size()) {
    throw DimensionError("metric expects square U matching vector size; got U " +
                         std::to_string(u.rows()) + "x" + std::to_string(u.cols()) + ", e " +
                         std::to_string(e.size()) + ", mu " + std::to_string(mu.size()));
  }
}

}  // namespace

DistanceMetricParams DistanceMetricParams::identity(Eigen::Index num_labels, Eigen::Index dim) {
  return {std::vector<Matrix>(static_cast<std::size_t>(num_labels), Matrix::Identity(dim, dim))};
}

double squared_mahalanobis(const Matrix& u, const Vector& e, const Vector& mu) {
  check_shapes(u, e, mu);
  return (u * (e - mu)).squaredNorm();
}

double mahalanobis(const Matrix& u, const Vector& e, const Vector& mu) {
  return std::sqrt(squared_mahalanobis(u, e, mu));
}

double label_divergence(const Matrix& u, const Vector& e, const Vector& mu, int distance_power) {
  return distance_power == 1 ? mahalanobis(u, e, mu) : squared_mahalanobis(u, e, mu);
}

SquaredMahalanobisGrad squared_mahalanobis_grad(const Matrix& u, const Vector& e, const Vector& mu) {
  check_shapes(u, e, mu);
  const Vector v = e - mu;
  const Vector uv = u * v;
  return {2.0 * uv * v.transpose(), 2.0 * u.transpose() * uv};
}

double metric_regularizer(const DistanceMetricParams& params) {
  double total = 0.0;
  for (const auto& u : params.u) total += u.squaredNorm();
  return total;
}

}  // namespace pnml
