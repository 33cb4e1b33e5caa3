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

#include "pnml/trainer.h"

#include <cmath>
#include <limits>

#include "gtest/gtest.h"
#include "pnml/random.h"

namespace pnml {
namespace {

// Four blobs at (+-2, +-2, noise...); label 0 is x0 > 0, label 1 is x1 > 0.
Dataset two_label_blobs(Eigen::Index per_blob, std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::Index n = 4 * per_blob;
  Matrix x(n, 4);
  LabelMatrix y(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int a = (i / per_blob) % 2, b = (i / per_blob) / 2;
    x(i, 0) = (a ? 2.0 : -2.0) + rng.uniform(-0.5, 0.5);
    x(i, 1) = (b ? 2.0 : -2.0) + rng.uniform(-0.5, 0.5);
    x(i, 2) = rng.uniform(-0.5, 0.5);
    x(i, 3) = rng.uniform(-0.5, 0.5);
    y(i, 0) = a;
    y(i, 1) = b;
  }
  return Dataset(x, y);
}

Hyperparams small_hp(Mode mode = Mode::kSingle) {
  Hyperparams hp;
  hp.mode = mode;
  hp.embedding_dim = 4;
  hp.batch_size = 16;
  hp.epochs = 10;
  hp.learning_rate = 0.01;
  hp.seed = 5;
  return hp;
}

double full_cross_entropy(const ModelParams& params, const Dataset& ds, const FeatureScaler& scaler,
                          const Hyperparams& hp) {
  const Matrix x = scaler.apply(ds.features());
  return run_iteration(params, x, ds.labels(), IterationPlan::full(ds.labels()), label_correlation_matrix(ds), hp,
                       false)
      .loss.cross_entropy;
}

TEST(ForwardLabelTest, PrototypesAreTheTwoEmbeddings) {
  Matrix x(2, 3);
  x << 1.0, -0.5, 0.25, -1.0, 0.75, 2.0;
  LabelMatrix y(2, 1);
  y << 1, 0;
  const Hyperparams hp = small_hp();
  const ModelParams model = init_model(3, 1, hp, 2);
  const LabelForward f = forward_label(model, x, y, 0, {{0}, {1}, {0, 1}}, hp);
  ASSERT_TRUE(f.active);
  EXPECT_TRUE(f.proto_pos.row(0).isApprox(f.embedding.output.row(0), 1e-15));
  EXPECT_TRUE(f.proto_neg.row(0).isApprox(f.embedding.output.row(1), 1e-15));
  EXPECT_GT(f.probabilities(0), 0.5);
  EXPECT_LT(f.probabilities(1), 0.5);
}

TEST(ForwardLabelTest, InactiveWithoutNegatives) {
  const Hyperparams hp = small_hp();
  const ModelParams model = init_model(2, 1, hp, 2);
  const LabelForward f = forward_label(model, Matrix::Ones(2, 2), LabelMatrix::Ones(2, 1), 0, {{0, 1}, {}, {0}}, hp);
  EXPECT_FALSE(f.active);
}

TEST(ForwardLabelTest, QueryOutsidePoolsRejected) {
  const Hyperparams hp = small_hp();
  const ModelParams model = init_model(2, 1, hp, 2);
  LabelMatrix y(3, 1);
  y << 1, 0, 0;
  EXPECT_THROW(forward_label(model, Matrix::Random(3, 2), y, 0, {{0}, {1}, {2}}, hp), DimensionError);
}

TEST(ForwardLabelTest, AblationDUsesEuclideanDistances) {
  const Dataset ds = two_label_blobs(3, 1);
  const Hyperparams hp = small_hp(Mode::kAblationD);
  const ModelParams model = init_model(4, 2, hp, 3);
  const IterationPlan plan = IterationPlan::full(ds.labels());
  const LabelForward f = forward_label(model, ds.features(), ds.labels(), 1, plan.labels[1], hp);
  for (std::size_t q = 0; q < f.query_at.size(); ++q) {
    const auto e = f.embedding.output.row(f.query_at[q]);
    EXPECT_NEAR(f.dist_pos(static_cast<Eigen::Index>(q), 0), (e - f.proto_pos.row(0)).squaredNorm(), 1e-12);
    EXPECT_NEAR(f.dist_neg(static_cast<Eigen::Index>(q), 0), (e - f.proto_neg.row(0)).squaredNorm(), 1e-12);
  }
}

TEST(ForwardLabelTest, InfiniteThresholdMatchesSingleMode) {
  const Dataset ds = two_label_blobs(4, 2);
  const ModelParams model = init_model(4, 2, small_hp(), 4);
  const IterationPlan plan = IterationPlan::full(ds.labels());
  for (Eigen::Index k = 0; k < 2; ++k) {
    const auto& lp = plan.labels[static_cast<std::size_t>(k)];
    const LabelForward single = forward_label(model, ds.features(), ds.labels(), k, lp, small_hp());
    const LabelForward multi = forward_label(model, ds.features(), ds.labels(), k, lp, small_hp(Mode::kMultiple),
                                             nullptr, std::numeric_limits<double>::infinity());
    ASSERT_EQ(multi.proto_pos.rows(), 1);
    ASSERT_EQ(multi.proto_neg.rows(), 1);
    EXPECT_TRUE(multi.probabilities.isApprox(single.probabilities, 1e-12));
  }
}

TEST(TrainTest, EpochsZeroReturnsInitialization) {
  const Dataset ds = two_label_blobs(5, 3);
  Hyperparams hp = small_hp();
  hp.epochs = 0;
  const TrainResult r = train(ds, hp);
  EXPECT_TRUE(r.history.empty());
  EXPECT_EQ(flatten(r.model.params), flatten(init_model(4, 2, hp, hp.seed)));
  EXPECT_EQ(r.model.prototypes.labels.size(), 2u);
}

TEST(TrainTest, SeparableBlobsReduceCrossEntropy) {
  const Dataset ds = two_label_blobs(20, 4);
  Hyperparams hp = small_hp();
  hp.epochs = 40;
  const TrainResult r = train(ds, hp);
  const double initial = full_cross_entropy(init_model(4, 2, hp, hp.seed), ds, r.model.scaler, hp);
  const double final_loss = full_cross_entropy(r.model.params, ds, r.model.scaler, hp);
  EXPECT_LT(final_loss, 0.1 * initial) << "initial " << initial << " final " << final_loss;
  for (const EpochStats& s : r.history) EXPECT_TRUE(std::isfinite(s.total));
}

TEST(TrainTest, HeavyMetricPenaltyShrinksNormsMonotonically) {
  const Dataset ds = two_label_blobs(10, 5);
  Hyperparams hp = small_hp();
  hp.lambda1 = 1e6;
  hp.learning_rate = 1e-3;
  hp.epochs = 20;
  const TrainResult r = train(ds, hp);
  std::vector<double> previous(2, std::sqrt(4.0));
  for (const EpochStats& s : r.history) {
    for (std::size_t k = 0; k < 2; ++k) {
      EXPECT_LT(s.metric_norms[k], previous[k]);
      previous[k] = s.metric_norms[k];
    }
  }
}

TEST(TrainTest, DeterministicHistory) {
  const Dataset ds = two_label_blobs(8, 6);
  for (Mode mode : {Mode::kSingle, Mode::kMultiple}) {
    const Hyperparams hp = small_hp(mode);
    const TrainResult a = train(ds, hp);
    const TrainResult b = train(ds, hp);
    ASSERT_EQ(a.history.size(), b.history.size());
    for (std::size_t e = 0; e < a.history.size(); ++e) {
      EXPECT_EQ(a.history[e].total, b.history[e].total);
      EXPECT_EQ(a.history[e].metric_norms, b.history[e].metric_norms);
    }
    EXPECT_EQ(flatten(a.model.params), flatten(b.model.params));
  }
}

TEST(TrainTest, SeedChangesResult) {
  const Dataset ds = two_label_blobs(8, 6);
  Hyperparams hp = small_hp();
  const TrainResult a = train(ds, hp);
  hp.seed = 6;
  EXPECT_NE(flatten(a.model.params), flatten(train(ds, hp).model.params));
}

TEST(TrainTest, DivergenceReportsBatch) {
  const Dataset ds = two_label_blobs(8, 7);
  Hyperparams hp = small_hp();
  hp.learning_rate = 1e300;
  try {
    train(ds, hp);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_GE(e.batch(), 0);
  }
}

TEST(PredictTest, MatchesPerInstanceProbability) {
  const Dataset ds = two_label_blobs(6, 8);
  for (Mode mode : {Mode::kSingle, Mode::kMultiple, Mode::kAblationI, Mode::kAblationD}) {
    Hyperparams hp = small_hp(mode);
    hp.epochs = 3;
    const TrainResult r = train(ds, hp);
    const Matrix p = predict_proba(r.model, ds.features());
    const Matrix x = r.model.scaler.apply(ds.features());
    for (Eigen::Index k = 0; k < 2; ++k) {
      const Matrix e = embed_rows(r.model.params.embedding_for(k), x).output;
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double expected = predict_label_prob(e.row(i).transpose(), r.model.prototypes.labels[k],
                                                   r.model.params.metric.u[k], hp.distance_power);
        EXPECT_NEAR(p(i, k), expected, 1e-10);
      }
    }
  }
}

TEST(PredictTest, OneSidedLabels) {
  Matrix x(4, 2);
  x << 1, 2, 3, 4, 5, 6, 7, 8;
  LabelMatrix y(4, 3);
  y << 1, 0, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1;
  Hyperparams hp = small_hp();
  hp.epochs = 2;
  const TrainResult r = train(Dataset(x, y), hp);
  EXPECT_EQ(r.model.prototypes.labels[1].pos.rows(), 0);
  EXPECT_EQ(r.model.prototypes.labels[2].neg.rows(), 0);
  const Matrix p = predict_proba(r.model, x);
  EXPECT_TRUE(p.col(1).isZero());
  EXPECT_TRUE((p.col(2).array() == 1.0).all());
}

TEST(AblationTest, LabelTermsAreIsolated) {
  const Dataset ds = two_label_blobs(4, 9);
  const Hyperparams hp = small_hp(Mode::kAblationI);
  ModelParams model = init_model(4, 2, hp, 10);
  const IterationPlan plan = IterationPlan::full(ds.labels());
  const CorrelationMatrix corr = label_correlation_matrix(ds);
  const IterationResult base = run_iteration(model, ds.features(), ds.labels(), plan, corr, hp, true);
  // Label 1's gradient never reaches embedding 0 and vice versa through L_e.
  model.embeddings[0].weight.array() += 0.3;
  model.embeddings[0].bias.array() -= 0.2;
  const IterationResult moved = run_iteration(model, ds.features(), ds.labels(), plan, corr, hp, false);
  EXPECT_EQ(moved.label_cross_entropy[1], base.label_cross_entropy[1]);
  EXPECT_NE(moved.label_cross_entropy[0], base.label_cross_entropy[0]);
}

TEST(GradientCheckTest, SingleMode) {
  const GradientCheckReport r = gradient_check(small_hp(), 25, 1e-3, 1);
  EXPECT_TRUE(r.passed()) << r.max_rel_error;
  EXPECT_EQ(r.trials, 25);
  EXPECT_EQ(r.groups.front().name, "W");
}

TEST(GradientCheckTest, MultipleModeWithClusters) {
  Hyperparams hp = small_hp(Mode::kMultiple);
  hp.alpha = 1.0;
  hp.rho = 0.1;
  const GradientCheckReport r = gradient_check(hp, 25, 1e-3, 2);
  EXPECT_TRUE(r.passed()) << r.max_rel_error;
  EXPECT_GT(r.max_clusters, 1);
}

TEST(GradientCheckTest, AblationDReportsFrozenMetric) {
  const GradientCheckReport r = gradient_check(small_hp(Mode::kAblationD), 10, 1e-3, 3);
  EXPECT_TRUE(r.passed());
  bool saw_metric = false;
  for (const auto& g : r.groups) {
    if (g.name.rfind("U[", 0) != 0) continue;
    saw_metric = true;
    EXPECT_TRUE(g.frozen);
    EXPECT_EQ(g.max_abs_analytic, 0.0);
  }
  EXPECT_TRUE(saw_metric);
}

TEST(GradientCheckTest, AblationIAndManhattanPower) {
  Hyperparams hp = small_hp(Mode::kAblationI);
  EXPECT_TRUE(gradient_check(hp, 10, 1e-3, 4).passed());
  hp = small_hp();
  hp.distance_power = 1;
  EXPECT_TRUE(gradient_check(hp, 10, 1e-3, 5).passed());
}

TEST(GradientCheckTest, RelativeErrorFloor) {
  EXPECT_EQ(gradient_relative_error(0.0, 0.0), 0.0);
  EXPECT_NEAR(gradient_relative_error(1e-9, 0.0), 1e-4, 1e-18);
  EXPECT_NEAR(gradient_relative_error(2.0, 1.0), 0.5, 1e-15);
}

}  // namespace
}  // namespace pnml
