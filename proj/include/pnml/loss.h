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

#ifndef PNML_LOSS_H_
#define PNML_LOSS_H_

#include "pnml/dataset.h"
#include "pnml/prototypes.h"
#include "pnml/types.h"

namespace pnml {

inline constexpr double kProbabilityClamp = 1e-7;
inline constexpr double kDefaultDecisionThreshold = 0.5;

struct LossBreakdown {
  double cross_entropy = 0.0;  // L_e
  double metric = 0.0;         // L_m
  double correlation = 0.0;    // L_c
  double total = 0.0;          // L_all
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

double stable_sigmoid(double s);

// log( (1/C) sum_c exp(-d_c) ).
double log_mean_exp_neg(const Vector& distances);

// Probability that `e` carries the label: equal-prior likelihood ratio of the
// positive and negative prototype mixtures under the label's divergence.
double predict_label_prob(const Vector& e, const LabelPrototypes& protos, const Matrix& u,
                          int distance_power = 2);

// -sum_{i,k} [y log p + (1 - y) log(1 - p)] with p clamped to [1e-7, 1 - 1e-7].
double cross_entropy(const Matrix& probabilities, const LabelMatrix& labels);

// 1/2 sum_{j,k} (1 - c_jk) m_j . m_k where m_j is the mean positive prototype of
// label j. Labels without positive prototypes are skipped.
double correlation_regularizer(const PrototypeSet& protos, const CorrelationMatrix& corr);

double total_loss(double cross_entropy, double metric, double correlation, double lambda1,
                  double lambda2);

LossBreakdown make_breakdown(double cross_entropy, double metric, double correlation,
                             double lambda1, double lambda2);

// p_k > threshold -> 1; ties resolve negative.
Eigen::VectorXi predict_labels(const Vector& probabilities, double threshold = kDefaultDecisionThreshold);

}  // namespace pnml

#endif  // PNML_LOSS_H_
