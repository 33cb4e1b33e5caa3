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

#include "pnml/report.h"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <unistd.h>

namespace pnml {

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw ConfigError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

nlohmann::json metrics_to_json(const MetricValues& m) {
  return {{"accuracy", m.accuracy},
          {"macro_f1", m.macro_f1},
          {"micro_f1", m.micro_f1},
          {"average_precision", m.average_precision},
          {"ranking_loss", m.ranking_loss}};
}

double metric_value(const MetricValues& m, GridMetric metric) {
  switch (metric) {
    case GridMetric::kAccuracy:
      return m.accuracy;
    case GridMetric::kMacroF1:
      return m.macro_f1;
    case GridMetric::kMicroF1:
      return m.micro_f1;
    case GridMetric::kAveragePrecision:
      return m.average_precision;
    case GridMetric::kRankingLoss:
      return m.ranking_loss;
  }
  return m.accuracy;
}

nlohmann::json report_to_json(const EvalReport& report, const Hyperparams& hp) {
  nlohmann::json folds = nlohmann::json::array();
  for (std::size_t i = 0; i < report.folds.size(); ++i) {
    nlohmann::json f = metrics_to_json(report.folds[i]);
    f["fold"] = i;
    folds.push_back(std::move(f));
  }
  return {{"dataset", report.dataset},
          {"hyperparams_hash", report.hyperparams_hash},
          {"hyperparams", hyperparams_to_json(hp)},
          {"wall_seconds", report.wall_seconds},
          {"folds", std::move(folds)},
          {"aggregate", metrics_to_json(report.mean)}};
}

std::string report_to_table(const EvalReport& report, const Hyperparams& hp) {
  std::ostringstream out;
  out << "# dataset\t" << report.dataset << '\n'
      << "# hyperparams_hash\t" << report.hyperparams_hash << '\n'
      << "# hyperparams\t" << hyperparams_to_json(hp).dump() << '\n'
      << "# wall_seconds\t" << report.wall_seconds << '\n'
      << "fold\taccuracy\tmacro_f1\tmicro_f1\taverage_precision\tranking_loss\n"
      << std::setprecision(17);
  auto row = [&](const std::string& label, const MetricValues& m) {
    out << label << '\t' << m.accuracy << '\t' << m.macro_f1 << '\t' << m.micro_f1 << '\t'
        << m.average_precision << '\t' << m.ranking_loss << '\n';
  };
  for (std::size_t i = 0; i < report.folds.size(); ++i) row(std::to_string(i), report.folds[i]);
  row("mean", report.mean);
  return out.str();
}

std::string render_report(const EvalReport& report, const Hyperparams& hp, ReportFormat format) {
  return format == ReportFormat::kJson ? report_to_json(report, hp).dump(2) + "\n"
                                       : report_to_table(report, hp);
}

std::string report_extension(ReportFormat format) { return format == ReportFormat::kJson ? ".json" : ".tsv"; }

}  // namespace pnml
