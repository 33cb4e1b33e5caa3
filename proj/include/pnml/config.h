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

#ifndef PNML_CONFIG_H_
#define PNML_CONFIG_H_

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "pnml/dataset.h"
#include "pnml/model.h"

namespace pnml {

enum class ReportFormat { kJson, kTable };

ReportFormat parse_report_format(const std::string& name);
std::string to_string(ReportFormat format);

// Metric used to pick the best grid point. ranking_loss is minimized, the
// others maximized.
enum class GridMetric { kAccuracy, kMacroF1, kMicroF1, kAveragePrecision, kRankingLoss };

GridMetric parse_grid_metric(const std::string& name);
std::string to_string(GridMetric metric);

struct RunConfig {
  std::filesystem::path data;
  DataFormat format = DataFormat::kSparseMultilabel;
  std::string dataset_name;
  std::filesystem::path out = "pnml-out";
  std::filesystem::path checkpoint;
  int folds = 5;
  ReportFormat report_format = ReportFormat::kJson;
  Hyperparams hp;

  // Empty lists fall back to the default search ranges.
  std::vector<double> grid_lambda1;
  std::vector<double> grid_lambda2;
  std::vector<double> grid_alpha;
  GridMetric grid_metric = GridMetric::kAccuracy;

  int gradcheck_trials = 100;
  double gradcheck_tolerance = 1e-3;
};

// {1e-7, 5e-7, 1e-6, ..., 5e-3, 1e-2}
std::vector<double> default_lambda_grid();
// {0.0001, 0.001, 0.01, 0.1, 0.5, 1.0}
std::vector<double> default_alpha_grid();

// Flat object; every key must be known and correctly typed. Relative paths
// resolve against `base_dir`. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

// Checks cross-field constraints and, when requested, that input paths exist.
void validate(const RunConfig& cfg, bool needs_data, bool needs_checkpoint);

nlohmann::json hyperparams_to_json(const Hyperparams& hp);
Hyperparams hyperparams_from_json(const nlohmann::json& doc);

// 16 hex digits of FNV-1a over the canonical hyperparameter serialization.
std::string hyperparams_hash(const Hyperparams& hp);

}  // namespace pnml

#endif  // PNML_CONFIG_H_
