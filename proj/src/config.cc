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

#include "pnml/config.h"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>

#include "pnml/random.h"

namespace pnml {
namespace {

using nlohmann::json;

double as_number(const std::string& key, const json& v) {
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

long long as_integer(const std::string& key, const json& v) {
  if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
  return v.get<long long>();
}

int as_int(const std::string& key, const json& v) {
  const long long n = as_integer(key, v);
  if (n < INT32_MIN || n > INT32_MAX) throw ConfigError("config key '" + key + "' is out of range");
  return static_cast<int>(n);
}

std::uint64_t as_u64(const std::string& key, const json& v) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) throw ConfigError("config key '" + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

bool as_bool(const std::string& key, const json& v) {
  if (!v.is_boolean()) throw ConfigError("config key '" + key + "' must be true or false");
  return v.get<bool>();
}

std::string as_string(const std::string& key, const json& v) {
  if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> as_number_list(const std::string& key, const json& v) {
  if (!v.is_array() || v.empty()) throw ConfigError("config key '" + key + "' must be a non-empty list of numbers");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(as_number(key, x));
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const json&, const std::filesystem::path&)>;

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"mode", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.hp.mode = parse_mode(as_string(k, v)); }},
      {"embedding_dim", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.hp.embedding_dim = as_int(k, v); }},
      {"beta", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.hp.beta = as_number(k, v); }},
      {"alpha", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.hp.alpha = as_number(k, v); }},
      {"lambda1", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.hp.lambda1 = as_number(k, v); }},
      {"lambda2", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.hp.lambda2 = as_number(k, v); }},
      {"rho", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.hp.rho = as_number(k, v); }},
      {"sigma", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.hp.sigma = as_number(k, v); }},
      {"ite_clustering", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.hp.ite_clustering = as_int(k, v); }},
      {"lambda_floor", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.hp.lambda_floor = as_number(k, v); }},
      {"r_pos", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.hp.r_pos = as_number(k, v); }},
      {"r_neg", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.hp.r_neg = as_number(k, v); }},
      {"batch_size", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.hp.batch_size = as_int(k, v); }},
      {"epochs", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.hp.epochs = as_int(k, v); }},
      {"learning_rate", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.hp.learning_rate = as_number(k, v); }},
      {"seed", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.hp.seed = as_u64(k, v); }},
      {"distance_power", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.hp.distance_power = as_int(k, v); }},
      {"standardize", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.hp.standardize = as_bool(k, v); }},
      {"threshold", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.hp.threshold = as_number(k, v); }},
      {"data", [](RunConfig& c, const std::string& k, const json& v, const std::filesystem::path& b) { c.data = resolve(b, as_string(k, v)); }},
      {"format", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.format = parse_data_format(as_string(k, v)); }},
      {"dataset_name", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.dataset_name = as_string(k, v); }},
      {"out", [](RunConfig& c, const std::string& k, const json& v, const std::filesystem::path& b) { c.out = resolve(b, as_string(k, v)); }},
      {"checkpoint", [](RunConfig& c, const std::string& k, const json& v, const std::filesystem::path& b) { c.checkpoint = resolve(b, as_string(k, v)); }},
      {"folds", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.folds = as_int(k, v); }},
      {"report_format", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.report_format = parse_report_format(as_string(k, v)); }},
      {"grid_lambda1", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.grid_lambda1 = as_number_list(k, v); }},
      {"grid_lambda2", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.grid_lambda2 = as_number_list(k, v); }},
      {"grid_alpha", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.grid_alpha = as_number_list(k, v); }},
      {"grid_metric", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.grid_metric = parse_grid_metric(as_string(k, v)); }},
      {"gradcheck_trials", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.gradcheck_trials = as_int(k, v); }},
      {"gradcheck_tolerance", [](RunConfig& c, const std::string& k, const json& v, auto&) { c.gradcheck_tolerance = as_number(k, v); }},
  };
  return table;
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "table") return ReportFormat::kTable;
  throw ConfigError("unknown report_format '" + name + "' (expected json|table)");
}

std::string to_string(ReportFormat format) { return format == ReportFormat::kJson ? "json" : "table"; }

GridMetric parse_grid_metric(const std::string& name) {
  if (name == "accuracy") return GridMetric::kAccuracy;
  if (name == "macro_f1") return GridMetric::kMacroF1;
  if (name == "micro_f1") return GridMetric::kMicroF1;
  if (name == "average_precision") return GridMetric::kAveragePrecision;
  if (name == "ranking_loss") return GridMetric::kRankingLoss;
  throw ConfigError("unknown grid_metric '" + name + "'");
}

std::string to_string(GridMetric metric) {
  switch (metric) {
    case GridMetric::kAccuracy:
      return "accuracy";
    case GridMetric::kMacroF1:
      return "macro_f1";
    case GridMetric::kMicroF1:
      return "micro_f1";
    case GridMetric::kAveragePrecision:
      return "average_precision";
    case GridMetric::kRankingLoss:
      return "ranking_loss";
  }
  return "accuracy";
}

std::vector<double> default_lambda_grid() {
  return {1e-7, 5e-7, 1e-6, 5e-6, 1e-5, 5e-5, 1e-4, 5e-4, 1e-3, 5e-3, 1e-2};
}

std::vector<double> default_alpha_grid() { return {0.0001, 0.001, 0.01, 0.1, 0.5, 1.0}; }

RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("config must be a flat object of key/value pairs");
  RunConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(cfg, key, value, base_dir);
  }
  validate(cfg.hp);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

void validate(const RunConfig& cfg, bool needs_data, bool needs_checkpoint) {
  validate(cfg.hp);
  if (cfg.folds < 2) throw ConfigError("folds must be >= 2");
  if (cfg.gradcheck_trials < 1) throw ConfigError("gradcheck_trials must be >= 1");
  if (!(cfg.gradcheck_tolerance > 0.0)) throw ConfigError("gradcheck_tolerance must be > 0");
  if (needs_data) {
    if (cfg.data.empty()) throw ConfigError("no dataset path given (config key 'data')");
    if (cfg.format == DataFormat::kDenseCsvPair) {
      for (const char* name : {"features.csv", "labels.csv"}) {
        if (!std::filesystem::exists(cfg.data / name)) {
          throw ConfigError("dataset file not found: " + (cfg.data / name).string());
        }
      }
    } else if (!std::filesystem::exists(cfg.data)) {
      throw ConfigError("dataset file not found: " + cfg.data.string());
    }
  }
  if (needs_checkpoint) {
    if (cfg.checkpoint.empty()) throw ConfigError("no checkpoint path given (config key 'checkpoint')");
    if (!std::filesystem::exists(cfg.checkpoint)) {
      throw ConfigError("checkpoint file not found: " + cfg.checkpoint.string());
    }
  }
}

nlohmann::json hyperparams_to_json(const Hyperparams& hp) {
  return json{{"mode", to_string(hp.mode)},
              {"embedding_dim", hp.embedding_dim},
              {"beta", hp.beta},
              {"alpha", hp.alpha},
              {"lambda1", hp.lambda1},
              {"lambda2", hp.lambda2},
              {"rho", hp.rho},
              {"sigma", hp.sigma},
              {"ite_clustering", hp.ite_clustering},
              {"lambda_floor", hp.lambda_floor},
              {"r_pos", hp.r_pos},
              {"r_neg", hp.r_neg},
              {"batch_size", hp.batch_size},
              {"epochs", hp.epochs},
              {"learning_rate", hp.learning_rate},
              {"seed", hp.seed},
              {"distance_power", hp.distance_power},
              {"standardize", hp.standardize},
              {"threshold", hp.threshold}};
}

Hyperparams hyperparams_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("hyperparameters must be an object");
  const auto& table = setters();
  RunConfig cfg;
  const json defaults = hyperparams_to_json(cfg.hp);
  for (const auto& [key, value] : doc.items()) {
    if (!defaults.contains(key)) throw ConfigError("unknown hyperparameter '" + key + "'");
    table.at(key)(cfg, key, value, {});
  }
  validate(cfg.hp);
  return cfg.hp;
}

std::string hyperparams_hash(const Hyperparams& hp) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a64(hyperparams_to_json(hp).dump()));
  return buf;
}

}  // namespace pnml
