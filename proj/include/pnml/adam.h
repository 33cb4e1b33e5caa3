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

#ifndef PNML_ADAM_H_
#define PNML_ADAM_H_

#include "pnml/types.h"

namespace pnml {

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  long step = 0;
  Vector first_moment;
  Vector second_moment;

  static AdamState for_size(Eigen::Index n);
};

// Bias-corrected Adam update of `params` in place.
void adam_step(AdamState& state, Vector& params, const Vector& grads, double learning_rate);

}  // namespace pnml

#endif  // PNML_ADAM_H_
