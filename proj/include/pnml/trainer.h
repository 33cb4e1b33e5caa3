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

#ifndef PNML_TRAINER_H_
#define PNML_TRAINER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pnml/dataset.h"
#include "pnml/loss.h"
#include "pnml/model.h"
#include "pnml/prototypes.h"
#include "pnml/types.h"

namespace pnml {

// Rows (dataset indices) one label uses in one iteration: prototype pools
// and the query batch, which must be drawn from pos U neg.
struct LabelPlan {
  IndexList pos;
  IndexList neg;
  IndexList queries;
};

struct IterationPlan {
  std::vector<LabelPlan> labels;

  // Every positive and negative row of every label, all rows as queries.
  static IterationPlan full(const LabelMatrix& labels);
};

// Normalized soft-assignment weights (C x n) for the positive and negative
// pools; prototypes are weights * embeddings.
struct LabelClusters {
  Matrix pos_weights;
  Matrix neg_weights;
};

// Forward state for one label. Distances are evaluated on the transformed
// embeddings t = U_k e, so d(e, mu) = f(||t - U_k mu||^2).
struct LabelForward {
  Eigen::Index label = 0;
  bool active = false;  // both pools non-empty
  IndexList pool;       // pos rows, then neg rows
  Eigen::Index n_pos = 0;
  Matrix x;
  EmbeddingBatch embedding;
  Matrix transformed;
  LabelClusters clusters;
  Matrix proto_pos;
  Matrix proto_neg;
  Matrix tproto_pos;
  Matrix tproto_neg;
  std::vector<Eigen::Index> query_at;  // position of each query inside `pool`
  Vector query_labels;
  Matrix dist_pos;  // Q x C+
  Matrix dist_neg;  // Q x C-
  Vector probabilities;
  double cross_entropy = 0.0;
  bool threshold_clamped = false;
};

// `x` holds the (already standardized) features of the whole training set.
// With `frozen` the given cluster weights replace adaptive clustering.
LabelForward forward_label(const ModelParams& model, const Matrix& x, const LabelMatrix& y,
                           Eigen::Index k, const LabelPlan& plan, const Hyperparams& hp,
                           const LabelClusters* frozen = nullptr,
                           std::optional<double> lambda_override = std::nullopt);

struct IterationResult {
  LossBreakdown loss;
  std::vector<double> label_cross_entropy;
  std::vector<LabelClusters> clusters;
  PrototypeSet prototypes;
  std::optional<ModelParams> grad;
  bool threshold_clamped = false;
};

// L_all and, optionally, its exact gradient for one iteration plan. Cluster
// assignments are constants of the iteration.
IterationResult run_iteration(const ModelParams& model, const Matrix& x, const LabelMatrix& y,
                              const IterationPlan& plan, const CorrelationMatrix& corr,
                              const Hyperparams& hp, bool compute_grad,
                              const std::vector<LabelClusters>* frozen = nullptr,
                              std::optional<double> lambda_override = std::nullopt);

struct EpochStats {
  double cross_entropy = 0.0;  // means over the epoch's iterations
  double metric = 0.0;
  double correlation = 0.0;
  double total = 0.0;
  std::vector<double> metric_norms;  // ||U_k||_F at epoch end
  long iterations = 0;
};

struct TrainedModel {
  Hyperparams hp;
  FeatureScaler scaler;
  ModelParams params;
  PrototypeSet prototypes;
};

struct TrainResult {
  TrainedModel model;
  std::vector<EpochStats> history;
  bool threshold_clamped = false;
  double seconds = 0.0;
};

// Mini-batch training with Adam. Each epoch samples a prototype pool per
// label; each iteration takes that label's next query chunk of batch_size
// rows from its shuffled pool and rebuilds prototypes from the whole pool.
// Throws NumericalError when the loss or gradient becomes non-finite.
TrainResult train(const Dataset& train_set, const Hyperparams& hp,
                  std::optional<double> lambda_override = std::nullopt);

// Prototypes from every training row, as used for inference.
PrototypeSet build_prototypes(const ModelParams& model, const Matrix& x, const LabelMatrix& y,
                              const Hyperparams& hp, std::optional<double> lambda_override = std::nullopt);

// N x K probabilities for raw (unstandardized) features. Labels without
// positive prototypes get 0; labels without negative prototypes get 1.
Matrix predict_proba(const TrainedModel& model, const Matrix& raw_features);

struct GradientGroupReport {
  std::string name;
  double max_rel_error = 0.0;
  double max_abs_analytic = 0.0;
  bool frozen = false;
};

struct GradientCheckReport {
  std::vector<GradientGroupReport> groups;
  int trials = 0;
  double max_rel_error = 0.0;
  Eigen::Index max_clusters = 0;  // largest prototype list seen
  double tolerance = 1e-3;

  bool passed() const { return max_rel_error < tolerance; }
};

// Relative error |a - n| / max(|a|, |n|, floor) used by the gradient checks.
inline constexpr double kGradCheckFloor = 1e-5;
double gradient_relative_error(double analytic, double numeric);

// Analytic gradient of L_all against central differences (step 1e-5) on
// random tiny problems (N <= 8, D <= 5, K <= 3, M <= 4), with cluster
// assignments held fixed. Frozen groups are reported without differencing.
GradientCheckReport gradient_check(const Hyperparams& hp, int trial_count, double tolerance,
                                   std::uint64_t seed);

}  // namespace pnml

#endif  // PNML_TRAINER_H_
