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

// Brute-force metric definitions evaluated directly over sets and label
// pairs. Shared by the unit tests and the acceptance suite.

#ifndef PNML_TESTS_METRIC_ORACLES_H_
#define PNML_TESTS_METRIC_ORACLES_H_

#include "pnml/dataset.h"
#include "pnml/types.h"

namespace pnml::oracles {

inline double accuracy_oracle(const LabelMatrix& p, const LabelMatrix& t) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    int inter = 0, uni = 0;
    for (Eigen::Index k = 0; k < p.cols(); ++k) {
      inter += p(i, k) && t(i, k);
      uni += p(i, k) || t(i, k);
    }
    total += uni == 0 ? 1.0 : static_cast<double>(inter) / uni;
  }
  return total / static_cast<double>(p.rows());
}

inline double f1_from_counts(long tp, long fp, long fn) {
  return tp + fp + fn == 0 ? 1.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

inline double micro_oracle(const LabelMatrix& p, const LabelMatrix& t) {
  long tp = 0, fp = 0, fn = 0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index k = 0; k < p.cols(); ++k) {
      tp += p(i, k) == 1 && t(i, k) == 1;
      fp += p(i, k) == 1 && t(i, k) == 0;
      fn += p(i, k) == 0 && t(i, k) == 1;
    }
  }
  return f1_from_counts(tp, fp, fn);
}

inline double macro_oracle(const LabelMatrix& p, const LabelMatrix& t) {
  double total = 0.0;
  for (Eigen::Index k = 0; k < p.cols(); ++k) {
    long tp = 0, fp = 0, fn = 0;
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      tp += p(i, k) == 1 && t(i, k) == 1;
      fp += p(i, k) == 1 && t(i, k) == 0;
      fn += p(i, k) == 0 && t(i, k) == 1;
    }
    total += f1_from_counts(tp, fp, fn);
  }
  return total / static_cast<double>(p.cols());
}

inline double ap_oracle(const Matrix& s, const LabelMatrix& t) {
  double total = 0.0;
  int counted = 0;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    const long relevant = t.row(i).sum();
    if (relevant == 0 || relevant == s.cols()) continue;
    double sum = 0.0;
    for (Eigen::Index l = 0; l < s.cols(); ++l) {
      if (t(i, l) != 1) continue;
      long rank = 0, above = 0;
      for (Eigen::Index j = 0; j < s.cols(); ++j) {
        if (s(i, j) >= s(i, l)) {
          ++rank;
          above += t(i, j);
        }
      }
      sum += static_cast<double>(above) / static_cast<double>(rank);
    }
    total += sum / static_cast<double>(relevant);
    ++counted;
  }
  return counted == 0 ? 1.0 : total / counted;
}

inline double ranking_oracle(const Matrix& s, const LabelMatrix& t) {
  double total = 0.0;
  int counted = 0;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    long pairs = 0, bad = 0;
    for (Eigen::Index a = 0; a < s.cols(); ++a) {
      for (Eigen::Index b = 0; b < s.cols(); ++b) {
        if (t(i, a) == 1 && t(i, b) == 0) {
          ++pairs;
          bad += s(i, a) <= s(i, b);
        }
      }
    }
    if (pairs == 0) continue;
    total += static_cast<double>(bad) / static_cast<double>(pairs);
    ++counted;
  }
  return counted == 0 ? 0.0 : total / counted;
}

}  // namespace pnml::oracles

#endif  // PNML_TESTS_METRIC_ORACLES_H_
