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

#ifndef PNML_EVAL_H_
#define PNML_EVAL_H_

#include <string>
#include <vector>

#include "pnml/dataset.h"
#include "pnml/types.h"

namespace pnml {

// Example-based Jaccard; an instance with empty prediction and empty truth scores 1.
double accuracy(const LabelMatrix& pred, const LabelMatrix& truth);

// F1 from TP/FP/FN pooled over all labels.
double micro_f1(const LabelMatrix& pred, const LabelMatrix& truth);

// Mean of per-label F1; a label with TP = FP = FN = 0 scores 1.
double macro_f1(const LabelMatrix& pred, const LabelMatrix& truth);

// Per instance, labels ranked by descending score; a label's rank counts every
// label scoring at least as high (ties ranked pessimistically). Instances
// whose truth is empty or full are excluded; returns 1 if none remain.
double average_precision(const Matrix& scores, const LabelMatrix& truth);

// Fraction of (relevant, irrelevant) pairs with score(relevant) <=
// score(irrelevant), averaged over instances having both kinds of labels.
// Returns 0 if no instance qualifies.
double ranking_loss(const Matrix& scores, const LabelMatrix& truth);

struct MetricValues {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double micro_f1 = 0.0;
  double average_precision = 0.0;
  double ranking_loss = 0.0;
};

// Thresholds `scores` (p > threshold) for the bipartition metrics.
MetricValues evaluate(const Matrix& scores, const LabelMatrix& truth, double threshold = 0.5);

MetricValues mean_of(const std::vector<MetricValues>& folds);

struct EvalReport {
  std::string dataset;
  std::string hyperparams_hash;
  double wall_seconds = 0.0;
  std::vector<MetricValues> folds;
  MetricValues mean;
};

}  // namespace pnml

#endif  // PNML_EVAL_H_
