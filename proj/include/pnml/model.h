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

#ifndef PNML_MODEL_H_
#define PNML_MODEL_H_

#include <cstdint>
#include <string>
#include <vector>

#include "pnml/embedding.h"
#include "pnml/metric.h"
#include "pnml/prototypes.h"
#include "pnml/types.h"

namespace pnml {

// single / multiple: one shared embedding, learned per-label metrics, with
// mean or adaptive prototypes. ablation-i: one embedding per label.
// ablation-d: U_k frozen at the identity (Euclidean). Both ablations use
// mean prototypes.
enum class Mode { kSingle, kMultiple, kAblationI, kAblationD };

Mode parse_mode(const std::string& name);
std::string to_string(Mode mode);

struct Hyperparams {
  Mode mode = Mode::kSingle;
  Eigen::Index embedding_dim = 0;  // 0: choose from D
  double beta = kDefaultLeakySlope;
  double alpha = 0.1;
  double lambda1 = 1e-5;
  double lambda2 = 1e-5;
  double rho = 1.0;
  double sigma = 1.0;  // initial cluster variance
  int ite_clustering = 3;
  double lambda_floor = 1e-6;
  double r_pos = 1.0;
  double r_neg = 1.0;
  int batch_size = 128;
  int epochs = 40;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  int distance_power = 2;
  bool standardize = true;
  double threshold = 0.5;

  bool uses_clustering() const { return mode == Mode::kMultiple; }
  bool shares_embedding() const { return mode != Mode::kAblationI; }
  bool learns_metric() const { return mode != Mode::kAblationD; }
  ClusteringConfig clustering(double sigma_now) const;
};

// Throws ConfigError. Allows epochs == 0 (no-op training).
void validate(const Hyperparams& hp);

Eigen::Index resolve_embedding_dim(const Hyperparams& hp, Eigen::Index num_features);

// Per-feature z-scoring fitted on training rows; constant columns keep scale 1.
struct FeatureScaler {
  Vector mean;
  Vector scale;

  static FeatureScaler fit(const Matrix& x);
  static FeatureScaler identity(Eigen::Index dim);
  Matrix apply(const Matrix& x) const;
};

struct ModelParams {
  std::vector<EmbeddingParams> embeddings;  // 1 shared, or K in ablation-i
  DistanceMetricParams metric;
  double log_sigma = 0.0;

  Eigen::Index num_labels() const { return static_cast<Eigen::Index>(metric.u.size()); }
  Eigen::Index dim() const { return embeddings.front().output_dim(); }
  const EmbeddingParams& embedding_for(Eigen::Index k) const {
    return embeddings.size() == 1 ? embeddings.front() : embeddings[k];
  }
  std::size_t embedding_index(Eigen::Index k) const {
    return embeddings.size() == 1 ? 0 : static_cast<std::size_t>(k);
  }
};

ModelParams init_model(Eigen::Index num_features, Eigen::Index num_labels, const Hyperparams& hp,
                       std::uint64_t seed);

ModelParams zeros_like(const ModelParams& p);

// Flat view for the optimizer and gradient checks. Order: every embedding
// (weight row-major, then bias), every U_k row-major, then log_sigma.
Vector flatten(const ModelParams& p);
void unflatten(const Vector& flat, ModelParams& p);

struct ParamGroup {
  std::string name;
  Eigen::Index offset;
  Eigen::Index size;
};

std::vector<ParamGroup> param_groups(const ModelParams& p);

}  // namespace pnml

#endif  // PNML_MODEL_H_
