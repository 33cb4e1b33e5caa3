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

#include "gtest/gtest.h"
#include "pnml/random.h"

namespace pnml {
namespace {

EmbeddingParams identity_params(Eigen::Index d, double beta = 0.2) {
  return {Matrix::Identity(d, d), Vector::Zero(d), beta};
}

EmbeddingParams random_params(Rng& rng, Eigen::Index m, Eigen::Index d) {
  EmbeddingParams p{Matrix(m, d), Vector(m), 0.2};
  for (Eigen::Index i = 0; i < p.weight.size(); ++i) p.weight.data()[i] = rng.uniform(-1.0, 1.0);
  for (Eigen::Index i = 0; i < m; ++i) p.bias(i) = rng.uniform(-1.0, 1.0);
  return p;
}

TEST(EmbeddingDimTest, Rule) {
  EXPECT_EQ(embedding_dim(72), 72);
  EXPECT_EQ(embedding_dim(200), 72);
  EXPECT_EQ(embedding_dim(201), 128);
  EXPECT_EQ(embedding_dim(294), 128);
}

TEST(EmbedTest, LeakyReluExamples) {
  EXPECT_EQ(embed(identity_params(2), Vector{{1.0, -1.0}}), (Vector{{1.0, -0.2}}));
  EXPECT_EQ(embed(identity_params(2), Vector::Zero(2)), Vector::Zero(2));
  EmbeddingParams p = identity_params(2);
  p.bias << 1.0, 1.0;
  const Vector e = embed(p, Vector{{-2.0, 0.0}});
  EXPECT_DOUBLE_EQ(e(0), -0.2);
  EXPECT_DOUBLE_EQ(e(1), 1.0);
}

TEST(EmbedTest, DimensionMismatch) {
  EXPECT_THROW(embed(identity_params(2), Vector::Zero(3)), DimensionError);
}

TEST(EmbedTest, PositivelyHomogeneousOnNegativeOrthant) {
  EmbeddingParams p = identity_params(3);
  const Vector x{{-1.0, -2.0, -0.5}};
  for (double t : {0.5, 2.0, 7.0}) EXPECT_TRUE(embed(p, t * x).isApprox(t * embed(p, x), 1e-15));
}

TEST(InitTest, GlorotBoundsAndZeroBias) {
  const auto p = init_embedding(10, 6, 0.2, 3);
  const double limit = std::sqrt(6.0 / 16.0);
  EXPECT_LE(p.weight.cwiseAbs().maxCoeff(), limit);
  EXPECT_EQ(p.bias, Vector::Zero(6));
  EXPECT_EQ(p.output_dim(), 6);
  EXPECT_EQ(p.input_dim(), 10);
  EXPECT_EQ(init_embedding(10, 6, 0.2, 3).weight, p.weight);
  EXPECT_THROW(init_embedding(2, 2, 1.0, 0), ConfigError);
}

TEST(EmbedBackwardTest, ZeroUpstream) {
  Rng rng(1);
  const auto p = random_params(rng, 3, 4);
  const auto g = embed_backward(p, Vector::Ones(4), Vector::Zero(3));
  EXPECT_EQ(g.weight, Matrix::Zero(3, 4));
  EXPECT_EQ(g.bias, Vector::Zero(3));
  EXPECT_EQ(g.input, Vector::Zero(4));
}

TEST(EmbedBackwardTest, LinearRegime) {
  EmbeddingParams p = identity_params(2);
  p.bias << 5.0, 5.0;
  const Vector x{{1.0, 2.0}};
  const Vector ge{{0.3, -0.7}};
  const auto g = embed_backward(p, x, ge);
  EXPECT_EQ(g.bias, ge);
  EXPECT_TRUE(g.weight.isApprox(ge * x.transpose()));
}

TEST(EmbedBackwardTest, SubgradientAtZeroIsOne) {
  const auto g = embed_backward(identity_params(1), Vector::Zero(1), Vector::Ones(1));
  EXPECT_EQ(g.bias(0), 1.0);
}

TEST(EmbedBackwardTest, MatchesFiniteDifferences) {
  Rng rng(11);
  constexpr double h = 1e-5;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng.below(4));
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.below(4));
    EmbeddingParams p = random_params(rng, m, d);
    Vector x(d), ge(m);
    for (Eigen::Index i = 0; i < d; ++i) x(i) = rng.uniform(-1.0, 1.0);
    for (Eigen::Index i = 0; i < m; ++i) ge(i) = rng.uniform(-1.0, 1.0);
    const auto g = embed_backward(p, x, ge);
    auto objective = [&](const EmbeddingParams& q, const Vector& xx) { return ge.dot(embed(q, xx)); };
    auto rel = [](double a, double n) { return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-5}); };
    for (Eigen::Index i = 0; i < p.weight.size(); ++i) {
      EmbeddingParams up = p, down = p;
      up.weight.data()[i] += h;
      down.weight.data()[i] -= h;
      EXPECT_LT(rel(g.weight.data()[i], (objective(up, x) - objective(down, x)) / (2 * h)), 1e-5);
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      EmbeddingParams up = p, down = p;
      up.bias(i) += h;
      down.bias(i) -= h;
      EXPECT_LT(rel(g.bias(i), (objective(up, x) - objective(down, x)) / (2 * h)), 1e-5);
    }
    for (Eigen::Index i = 0; i < d; ++i) {
      Vector up = x, down = x;
      up(i) += h;
      down(i) -= h;
      EXPECT_LT(rel(g.input(i), (objective(p, up) - objective(p, down)) / (2 * h)), 1e-5);
    }
  }
}

TEST(EmbedRowsTest, MatchesPerRowForms) {
  Rng rng(5);
  const auto p = random_params(rng, 3, 4);
  Matrix x(5, 4), upstream(5, 3);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1.0, 1.0);
  for (Eigen::Index i = 0; i < upstream.size(); ++i) upstream.data()[i] = rng.uniform(-1.0, 1.0);
  const auto batch = embed_rows(p, x);
  Matrix gw = Matrix::Zero(3, 4);
  Vector gb = Vector::Zero(3);
  embed_rows_backward(p, x, batch, upstream, gw, gb);
  Matrix gw_ref = Matrix::Zero(3, 4);
  Vector gb_ref = Vector::Zero(3);
  for (Eigen::Index i = 0; i < 5; ++i) {
    EXPECT_TRUE(batch.output.row(i).transpose().isApprox(embed(p, x.row(i).transpose()), 1e-14));
    const auto g = embed_backward(p, x.row(i).transpose(), upstream.row(i).transpose());
    gw_ref += g.weight;
    gb_ref += g.bias;
  }
  EXPECT_TRUE(gw.isApprox(gw_ref, 1e-13));
  EXPECT_TRUE(gb.isApprox(gb_ref, 1e-13));
}

}  // namespace
}  // namespace pnml
