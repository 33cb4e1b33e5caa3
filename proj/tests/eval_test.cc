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

#include <cmath>

#include "gtest/gtest.h"
#include "metric_oracles.h"
#include "pnml/random.h"

namespace pnml {
namespace {

using namespace oracles;

LabelMatrix labels(std::initializer_list<std::initializer_list<int>> rows) {
  LabelMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (int v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

Matrix scores(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

TEST(AccuracyTest, Examples) {
  EXPECT_DOUBLE_EQ(accuracy(labels({{1, 1, 0}}), labels({{0, 1, 1}})), 1.0 / 3.0);
  const LabelMatrix y = labels({{1, 0, 1}, {0, 1, 0}});
  EXPECT_EQ(accuracy(y, y), 1.0);
  EXPECT_EQ(accuracy(labels({{0, 0}}), labels({{0, 0}})), 1.0);
  EXPECT_THROW(accuracy(labels({{0, 0}}), labels({{0, 0, 1}})), DimensionError);
}

TEST(F1Test, Examples) {
  const LabelMatrix y = labels({{1, 0, 1}, {0, 1, 0}});
  EXPECT_EQ(micro_f1(y, y), 1.0);
  EXPECT_EQ(macro_f1(y, y), 1.0);
  EXPECT_DOUBLE_EQ(micro_f1(labels({{1, 0}, {1, 1}}), labels({{1, 1}, {0, 1}})), 2.0 / 3.0);
  EXPECT_EQ(micro_f1(labels({{0, 0}, {0, 0}}), labels({{1, 0}, {0, 1}})), 0.0);
}

TEST(F1Test, EmptyLabelCountsAsPerfect) {
  // Label 1 is never true and never predicted.
  EXPECT_DOUBLE_EQ(macro_f1(labels({{1, 0}, {0, 0}}), labels({{1, 0}, {1, 0}})), (2.0 / 3.0 + 1.0) / 2.0);
}

TEST(AveragePrecisionTest, Examples) {
  EXPECT_EQ(average_precision(scores({{0.9, 0.1, 0.8}}), labels({{1, 0, 1}})), 1.0);
  EXPECT_EQ(average_precision(scores({{0.9, 0.5, 0.8}}), labels({{1, 0, 1}})), 1.0);
  EXPECT_EQ(average_precision(scores({{0.1, 0.9}}), labels({{1, 0}})), 0.5);
}

TEST(AveragePrecisionTest, ExcludesEmptyAndFullRows) {
  EXPECT_EQ(average_precision(scores({{0.1, 0.9}, {0.3, 0.2}, {0.5, 0.5}}), labels({{1, 0}, {0, 0}, {1, 1}})), 0.5);
  EXPECT_EQ(average_precision(scores({{0.3, 0.2}}), labels({{0, 0}})), 1.0);
}

TEST(RankingLossTest, Examples) {
  EXPECT_EQ(ranking_loss(scores({{0.9, 0.8, 0.1}}), labels({{1, 0, 0}})), 0.0);
  EXPECT_EQ(ranking_loss(scores({{0.1, 0.9, 0.8}}), labels({{1, 0, 0}})), 1.0);
  EXPECT_EQ(ranking_loss(scores({{0.9, 0.2, 0.5}}), labels({{1, 1, 0}})), 0.5);
  EXPECT_EQ(ranking_loss(scores({{0.5, 0.5}}), labels({{1, 0}})), 1.0);
  EXPECT_EQ(ranking_loss(scores({{0.5, 0.5}}), labels({{1, 1}})), 0.0);
}

TEST(MetricOracleTest, RandomSmallInstancesMatchExactly) {
  Rng rng(31);
  for (int t = 0; t < 300; ++t) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(6));
    const Eigen::Index k = 1 + static_cast<Eigen::Index>(rng.below(5));
    Matrix s(n, k);
    LabelMatrix truth(n, k);
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      // Coarse grid so ties occur.
      s.data()[i] = static_cast<double>(rng.below(5)) / 4.0;
      truth.data()[i] = rng.uniform() < 0.5 ? 1 : 0;
    }
    const LabelMatrix pred = (s.array() > 0.5).cast<int>().matrix();
    EXPECT_EQ(accuracy(pred, truth), accuracy_oracle(pred, truth));
    EXPECT_EQ(micro_f1(pred, truth), micro_oracle(pred, truth));
    EXPECT_EQ(macro_f1(pred, truth), macro_oracle(pred, truth));
    EXPECT_EQ(average_precision(s, truth), ap_oracle(s, truth));
    EXPECT_EQ(ranking_loss(s, truth), ranking_oracle(s, truth));
  }
}

TEST(MetricPropertyTest, RankingMetricsInvariantUnderMonotoneTransform) {
  Rng rng(32);
  for (int t = 0; t < 100; ++t) {
    Matrix s(4, 5);
    LabelMatrix truth(4, 5);
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      s.data()[i] = rng.uniform();
      truth.data()[i] = rng.uniform() < 0.4 ? 1 : 0;
    }
    const Matrix transformed = (3.0 * s.array().exp() - 1.0).matrix();
    EXPECT_EQ(average_precision(s, truth), average_precision(transformed, truth));
    EXPECT_EQ(ranking_loss(s, truth), ranking_loss(transformed, truth));
  }
}

TEST(MetricPropertyTest, MacroF1InvariantToLabelPermutation) {
  Rng rng(33);
  for (int t = 0; t < 100; ++t) {
    LabelMatrix p(5, 4), y(5, 4);
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      p.data()[i] = rng.uniform() < 0.5;
      y.data()[i] = rng.uniform() < 0.5;
    }
    std::vector<Eigen::Index> perm{0, 1, 2, 3};
    rng.shuffle(perm);
    LabelMatrix pp(5, 4), yy(5, 4);
    for (Eigen::Index k = 0; k < 4; ++k) {
      pp.col(k) = p.col(perm[k]);
      yy.col(k) = y.col(perm[k]);
    }
    EXPECT_NEAR(macro_f1(pp, yy), macro_f1(p, y), 1e-15);
  }
}

TEST(MetricPropertyTest, RankingLossPlusGainIsOneWithoutTies) {
  Rng rng(34);
  for (int t = 0; t < 100; ++t) {
    Matrix s(3, 4);
    LabelMatrix y(3, 4);
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      s.data()[i] = rng.uniform();
      y.data()[i] = rng.uniform() < 0.5;
    }
    double gain = 0.0;
    int counted = 0;
    for (Eigen::Index i = 0; i < 3; ++i) {
      long pairs = 0, good = 0;
      for (Eigen::Index a = 0; a < 4; ++a) {
        for (Eigen::Index b = 0; b < 4; ++b) {
          if (y(i, a) == 1 && y(i, b) == 0) {
            ++pairs;
            good += s(i, a) > s(i, b);
          }
        }
      }
      if (pairs == 0) continue;
      gain += static_cast<double>(good) / pairs;
      ++counted;
    }
    if (counted == 0) continue;
    EXPECT_NEAR(ranking_loss(s, y) + gain / counted, 1.0, 1e-12);
  }
}

TEST(EvaluateTest, BundlesAndAverages) {
  const Matrix s = scores({{0.9, 0.2}, {0.4, 0.7}});
  const LabelMatrix y = labels({{1, 0}, {0, 1}});
  const MetricValues m = evaluate(s, y);
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_EQ(m.ranking_loss, 0.0);
  const MetricValues mean = mean_of({m, {0.5, 0.5, 0.5, 0.5, 0.5}});
  EXPECT_NEAR(mean.accuracy, 0.75, 1e-12);
  EXPECT_NEAR(mean.ranking_loss, 0.25, 1e-12);
}

TEST(EvaluateTest, AllMetricsInUnitInterval) {
  Rng rng(35);
  for (int t = 0; t < 100; ++t) {
    Matrix s(6, 4);
    LabelMatrix y(6, 4);
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      s.data()[i] = rng.uniform();
      y.data()[i] = rng.uniform() < 0.5;
    }
    const MetricValues m = evaluate(s, y);
    for (double v : {m.accuracy, m.macro_f1, m.micro_f1, m.average_precision, m.ranking_loss}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

}  // namespace
}  // namespace pnml
