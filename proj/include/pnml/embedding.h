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

#ifndef PNML_EMBEDDING_H_
#define PNML_EMBEDDING_H_

#include <cstdint>

#include "pnml/types.h"

namespace pnml {

inline constexpr double kDefaultLeakySlope = 0.2;

// One fully connected layer R^D -> R^M followed by LeakyReLU.
struct EmbeddingParams {
  Matrix weight;  // M x D
  Vector bias;    // M
  double beta = kDefaultLeakySlope;

  Eigen::Index input_dim() const { return weight.cols(); }
  Eigen::Index output_dim() const { return weight.rows(); }
};

// 72 when D <= 200, otherwise 128.
Eigen::Index embedding_dim(Eigen::Index num_features);

// Glorot-uniform weights in +-sqrt(6 / (D + M)), zero bias.
EmbeddingParams init_embedding(Eigen::Index input_dim, Eigen::Index output_dim, double beta,
                               std::uint64_t seed);

Vector embed(const EmbeddingParams& p, const Vector& x);

struct EmbeddingGrad {
  Matrix weight;
  Vector bias;
  Vector input;
};

// Gradients of <grad_e, embed(p, x)>. The subgradient at a pre-activation of
// exactly zero takes the positive-branch slope 1.
EmbeddingGrad embed_backward(const EmbeddingParams& p, const Vector& x, const Vector& grad_e);

// Row-batched forms used by training: rows of `x` are instances.
struct EmbeddingBatch {
  Matrix pre_activation;  // n x M
  Matrix output;          // n x M
};

EmbeddingBatch embed_rows(const EmbeddingParams& p, const Matrix& x);

// Accumulates weight/bias gradients for upstream `grad_out` (n x M) into `grad`.
void embed_rows_backward(const EmbeddingParams& p, const Matrix& x, const EmbeddingBatch& batch,
                         const Matrix& grad_out, Matrix& grad_weight, Vector& grad_bias);

}  // namespace pnml

#endif  // PNML_EMBEDDING_H_
