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

#ifndef PNML_CHECKPOINT_H_
#define PNML_CHECKPOINT_H_

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "pnml/trainer.h"

namespace pnml {

inline constexpr int kCheckpointVersion = 1;

// Text layout:
//   PNML-CHECKPOINT <version>
//   hyperparams <json>
//   shape <D> <M> <K> <embeddings>
//   tensor <name> <rows> <cols>
//   <row-major values, one row per line>
//   ...
// Tensors: scaler.mean, scaler.scale, embedding[g].weight, embedding[g].bias,
// metric[k], log_sigma, prototypes[k].pos, prototypes[k].neg.
void save_checkpoint(const TrainedModel& model, std::ostream& out);
void save_checkpoint(const TrainedModel& model, const std::filesystem::path& path);

// Throws ParseError (with line number) on malformed input.
TrainedModel load_checkpoint(std::istream& in);
TrainedModel load_checkpoint(const std::filesystem::path& path);

// Tab-separated sidecar: epoch, iterations, the four loss terms, ||U_k||_F.
void save_loss_history(const std::vector<EpochStats>& history, std::ostream& out);

}  // namespace pnml

#endif  // PNML_CHECKPOINT_H_
