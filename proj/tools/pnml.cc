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

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pnml/commands.h"
#include "pnml/config.h"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string data;
  std::string format;
  std::string checkpoint;
  std::optional<std::uint64_t> seed;
  std::string mode;
};

void add_common(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config, "Flat JSON config file");
  cmd->add_option("--out", flags.out, "Output directory");
  cmd->add_option("--seed", flags.seed, "Overrides the config seed");
  cmd->add_option("--mode", flags.mode, "single|multiple|ablation-i|ablation-d");
  cmd->add_option("--data", flags.data, "Dataset path (overrides config 'data')");
  cmd->add_option("--format", flags.format, "sparse-multilabel|dense-csv-pair");
  cmd->add_option("--checkpoint", flags.checkpoint, "Checkpoint path (overrides config 'checkpoint')");
}

pnml::RunConfig build_config(const Flags& flags) {
  pnml::RunConfig cfg = flags.config.empty() ? pnml::RunConfig{} : pnml::load_config(flags.config);
  if (!flags.out.empty()) cfg.out = flags.out;
  if (!flags.data.empty()) cfg.data = flags.data;
  if (!flags.format.empty()) cfg.format = pnml::parse_data_format(flags.format);
  if (!flags.checkpoint.empty()) cfg.checkpoint = flags.checkpoint;
  if (flags.seed) cfg.hp.seed = *flags.seed;
  if (!flags.mode.empty()) cfg.hp.mode = pnml::parse_mode(flags.mode);
  pnml::validate(cfg.hp);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prototypical networks for multi-label learning"};
  app.require_subcommand(1);
  Flags flags;
  const std::pair<const char*, const char*> commands[] = {
      {"train", "Train on a dataset and write a checkpoint"},
      {"eval", "Evaluate a checkpoint on a dataset"},
      {"cv", "k-fold cross-validation"},
      {"grid", "Cross-validated grid search over lambda1, lambda2 and alpha"},
      {"gradcheck", "Compare analytic and finite-difference gradients"},
      {"export-protos", "Write prototype vectors as a delimited table"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pnml::kExitConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  pnml::RunConfig cfg;
  try {
    cfg = build_config(flags);
  } catch (const pnml::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return pnml::kExitConfig;
  }
  return pnml::run_command(name, cfg, std::cout, std::cerr);
}
