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

#ifndef PNML_PROTOTYPES_H_
#define PNML_PROTOTYPES_H_

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pnml/types.h"

namespace pnml {

struct ClusteringConfig {
  double alpha = 0.1;   // concentration
  double sigma = 1.0;   // cluster variance
  double rho = 1.0;     // spread of the base distribution
  int ite_clustering = 3;
  double lambda_floor = 1e-6;
};

void validate(const ClusteringConfig& cfg);

// lambda = -2 sigma log(alpha / (1 + rho / sigma)^(M / 2)). May be <= 0 for
// large alpha.
double distance_threshold(const ClusteringConfig& cfg, Eigen::Index dim);

// distance_threshold clamped below at cfg.lambda_floor.
double clustering_threshold(const ClusteringConfig& cfg, Eigen::Index dim);

using DistanceFn = std::function<double(const Vector&, const Vector&)>;

// Arithmetic mean of the rows of `embeddings`.
Vector single_prototype(const Matrix& embeddings);

// softmax(-d) over prototypes, log-sum-exp stabilized.
Vector soft_assign_from_distances(const Vector& distances);
Vector soft_assign(const Vector& e, const Matrix& prototypes, const DistanceFn& dist);

struct Clustering {
  Matrix prototypes;  // C x M
  // C x n; row c holds z_{i,c} / sum_i z_{i,c}, so prototypes = weights * embeddings.
  Matrix weights;
};

// Adaptive prototype creation over the rows of `embeddings`:
//   start from one prototype at the mean; per pass, scan rows in order and
//   open a prototype at any row whose nearest prototype is farther than
//   lambda (ties resolve to the lowest index); soft-assign every row; move each
//   prototype to its soft-weighted mean. Runs cfg.ite_clustering passes.
// A prototype whose total soft mass underflows to zero is dropped.
Clustering adaptive_prototypes(const Matrix& embeddings, const ClusteringConfig& cfg,
                               const DistanceFn& dist,
                               std::optional<double> lambda_override = std::nullopt);

// Prototype vectors per label, one per row. `pos` has zero rows for labels
// without positive training instances.
struct LabelPrototypes {
  Matrix pos;
  Matrix neg;
};

struct PrototypeSet {
  std::vector<LabelPrototypes> labels;

  std::size_t total_count() const;
};

// Tab-separated rows "label polarity cluster warnings x0 .. x{M-1}", one per
// prototype, preceded by a header line.
void export_prototypes(const PrototypeSet& set, std::ostream& out);

}  // namespace pnml

#endif  // PNML_PROTOTYPES_H_
