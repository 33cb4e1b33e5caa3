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

#ifndef PNML_COMMANDS_H_
#define PNML_COMMANDS_H_

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "pnml/config.h"
#include "pnml/dataset.h"
#include "pnml/eval.h"
#include "pnml/trainer.h"

namespace pnml {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

// Trains on every fold's training rows and evaluates the held-out rows.
// Folds come from the "split" sub-seed of hp.seed.
EvalReport run_cv(const Dataset& ds, const Hyperparams& hp, int folds, const std::string& name);

struct GridPoint {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double alpha = 0.0;
  EvalReport report;
};

struct GridResult {
  std::vector<GridPoint> points;  // lambda1-major, then lambda2, then alpha
  std::size_t best = 0;
  GridMetric metric = GridMetric::kAccuracy;
};

using GridProgress = std::function<void(const GridPoint&)>;

// Exhaustive cross-validated search. The first point wins ties.
GridResult run_grid(const Dataset& ds, const Hyperparams& base, int folds, const std::vector<double>& lambda1,
                    const std::vector<double>& lambda2, const std::vector<double>& alpha, GridMetric metric,
                    const std::string& name, const GridProgress& progress = {});

// Each command writes into cfg.out and returns an exit code; errors are
// thrown and mapped by run_command.
int cmd_train(const RunConfig& cfg, std::ostream& log);
int cmd_eval(const RunConfig& cfg, std::ostream& log);
int cmd_cv(const RunConfig& cfg, std::ostream& log);
int cmd_grid(const RunConfig& cfg, std::ostream& log);
int cmd_gradcheck(const RunConfig& cfg, std::ostream& log);
int cmd_export_prototypes(const RunConfig& cfg, std::ostream& log);

// Dispatches by name ("train", "eval", "cv", "grid", "gradcheck",
// "export-protos"). Config and input errors exit 2, numerical failures 3.
int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log, std::ostream& err);

}  // namespace pnml

#endif  // PNML_COMMANDS_H_
