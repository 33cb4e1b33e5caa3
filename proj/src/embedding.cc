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

#include "pnml/embedding.h"

#include <cmath>
#include <string>

#include "pnml/random.h"

namespace pnml {
namespace {

void check_input(const EmbeddingParams& p, Eigen::Index dim) {
  if (p.bias.size() != p.weight.rows()) throw DimensionError("embedding bias size differs from M");
  if (dim != p.weight.cols()) {
    throw DimensionError("embedding expects D=" + std::to_string(p.weight.cols()) + ", got " +
                         std::to_string(dim));
  }
}

}  // namespace

Eigen::Index embedding_dim(Eigen::Index num_features) { return num_features <= 200 ? 72 : 128; }

EmbeddingParams init_embedding(Eigen::Index input_dim, Eigen::Index output_dim, double beta,
                               std::uint64_t seed) {
  if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("LeakyReLU slope must lie in (0, 1)");
  const double limit = std::sqrt(6.0 / static_cast<double>(input_dim + output_dim));
  Rng rng(seed);
  EmbeddingParams p{Matrix(output_dim, input_dim), Vector::Zero(output_dim), beta};
  for (Eigen::Index i = 0; i < output_dim; ++i) {
    for (Eigen::Index j = 0; j < input_dim; ++j) p.weight(i, j) = rng.uniform(-limit, limit);
  }
  return p;
}

Vector embed(const EmbeddingParams& p, const Vector& x) {
  check_input(p, x.size());
  Vector z = p.weight * x + p.bias;
  return z.unaryExpr([beta = p.beta](double v) { return v >= 0.0 ? v : beta * v; });
}

EmbeddingGrad embed_backward(const EmbeddingParams& p, const Vector& x, const Vector& grad_e) {
  check_input(p, x.size());
  if (grad_e.size() != p.weight.rows()) throw DimensionError("upstream gradient size differs from M");
  const Vector z = p.weight * x + p.bias;
  const Vector gz =
      grad_e.array() * z.unaryExpr([beta = p.beta](double v) { return v >= 0.0 ? 1.0 : beta; }).array();
  return {gz * x.transpose(), gz, p.weight.transpose() * gz};
}

EmbeddingBatch embed_rows(const EmbeddingParams& p, const Matrix& x) {
  check_input(p, x.cols());
  EmbeddingBatch out;
  out.pre_activation.noalias() = x * p.weight.transpose();
  out.pre_activation.rowwise() += p.bias.transpose();
  out.output = out.pre_activation.unaryExpr([beta = p.beta](double v) { return v >= 0.0 ? v : beta * v; });
  return out;
}

void embed_rows_backward(const EmbeddingParams& p, const Matrix& x, const EmbeddingBatch& batch,
                         const Matrix& grad_out, Matrix& grad_weight, Vector& grad_bias) {
  const Matrix gz = grad_out.cwiseProduct(
      batch.pre_activation.unaryExpr([beta = p.beta](double v) { return v >= 0.0 ? 1.0 : beta; }));
  grad_weight.noalias() += gz.transpose() * x;
  grad_bias += gz.colwise().sum().transpose();
}

}  // namespace pnml
