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

#ifndef PNML_METRIC_H_
#define PNML_METRIC_H_

#include <vector>

#include "pnml/types.h"

namespace pnml {

// One M x M linear map U_k per label; the label-k distance is ||U_k (e - mu)||.
struct DistanceMetricParams {
  std::vector<Matrix> u;

  static DistanceMetricParams identity(Eigen::Index num_labels, Eigen::Index dim);
};

double mahalanobis(const Matrix& u, const Vector& e, const Vector& mu);
double squared_mahalanobis(const Matrix& u, const Vector& e, const Vector& mu);

// Divergence used inside exp(-d): squared form for power 2, plain norm for 1.
double label_divergence(const Matrix& u, const Vector& e, const Vector& mu, int distance_power);

struct SquaredMahalanobisGrad {
  Matrix u;  // 2 U v v^T
  Vector e;  // 2 U^T U v, and -e for mu
};

SquaredMahalanobisGrad squared_mahalanobis_grad(const Matrix& u, const Vector& e, const Vector& mu);

// Sum of squared Frobenius norms.
double metric_regularizer(const DistanceMetricParams& params);

}  // namespace pnml

#endif  // PNML_METRIC_H_
