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

#ifndef PNML_REPORT_H_
#define PNML_REPORT_H_

#include <filesystem>
#include <string>

#include "json.hpp"
#include "pnml/config.h"
#include "pnml/eval.h"
#include "pnml/model.h"

namespace pnml {

// Writes to a temporary sibling, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

nlohmann::json metrics_to_json(const MetricValues& m);
double metric_value(const MetricValues& m, GridMetric metric);

nlohmann::json report_to_json(const EvalReport& report, const Hyperparams& hp);

// Tab-separated: '#'-prefixed metadata lines, a header, one row per fold and
// a final "mean" row.
std::string report_to_table(const EvalReport& report, const Hyperparams& hp);

std::string render_report(const EvalReport& report, const Hyperparams& hp, ReportFormat format);
std::string report_extension(ReportFormat format);

}  // namespace pnml

#endif  // PNML_REPORT_H_
