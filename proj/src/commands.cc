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

#include "pnml/commands.h"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "pnml/checkpoint.h"
#include "pnml/random.h"
#include "pnml/report.h"

namespace pnml {
namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string dataset_name(const RunConfig& cfg) {
  if (!cfg.dataset_name.empty()) return cfg.dataset_name;
  const auto stem = cfg.data.filename().replace_extension().string();
  return stem.empty() ? cfg.data.parent_path().filename().string() : stem;
}

Dataset load_input(const RunConfig& cfg) { return load_dataset(cfg.data, cfg.format); }

bool better(double candidate, double incumbent, GridMetric metric) {
  return metric == GridMetric::kRankingLoss ? candidate < incumbent : candidate > incumbent;
}

void write_report(const RunConfig& cfg, const std::string& stem, const EvalReport& report, const Hyperparams& hp) {
  write_file_atomic(cfg.out / (stem + report_extension(cfg.report_format)),
                    render_report(report, hp, cfg.report_format));
}

}  // namespace

EvalReport run_cv(const Dataset& ds, const Hyperparams& hp, int folds, const std::string& name) {
  validate(hp);
  const auto start = std::chrono::steady_clock::now();
  EvalReport report;
  report.dataset = name;
  report.hyperparams_hash = hyperparams_hash(hp);
  for (const FoldSplit& split : kfold_split(ds, folds, derive_seed(hp.seed, "split"))) {
    const TrainResult trained = train(split.train, hp);
    const Matrix scores = predict_proba(trained.model, split.test.features());
    report.folds.push_back(evaluate(scores, split.test.labels(), hp.threshold));
  }
  report.mean = mean_of(report.folds);
  report.wall_seconds = seconds_since(start);
  return report;
}

GridResult run_grid(const Dataset& ds, const Hyperparams& base, int folds, const std::vector<double>& lambda1,
                    const std::vector<double>& lambda2, const std::vector<double>& alpha, GridMetric metric,
                    const std::string& name, const GridProgress& progress) {
  if (lambda1.empty() || lambda2.empty() || alpha.empty()) throw ConfigError("grid axes must be non-empty");
  GridResult result;
  result.metric = metric;
  for (double l1 : lambda1) {
    for (double l2 : lambda2) {
      for (double a : alpha) {
        Hyperparams hp = base;
        hp.lambda1 = l1;
        hp.lambda2 = l2;
        hp.alpha = a;
        GridPoint point{l1, l2, a, run_cv(ds, hp, folds, name)};
        if (progress) progress(point);
        if (!result.points.empty() &&
            better(metric_value(point.report.mean, metric),
                   metric_value(result.points[result.best].report.mean, metric), metric)) {
          result.best = result.points.size();
        }
        result.points.push_back(std::move(point));
      }
    }
  }
  return result;
}

int cmd_train(const RunConfig& cfg, std::ostream& log) {
  validate(cfg, true, false);
  const Dataset ds = load_input(cfg);
  const TrainResult result = train(ds, cfg.hp);
  if (result.threshold_clamped) {
    log << "warning: cluster threshold was non-positive and was clamped to " << cfg.hp.lambda_floor << '\n';
  }
  save_checkpoint(result.model, cfg.out / "model.ckpt");
  std::ostringstream history;
  save_loss_history(result.history, history);
  write_file_atomic(cfg.out / "loss_history.tsv", history.str());

  nlohmann::json summary = {{"dataset", dataset_name(cfg)},
                            {"hyperparams_hash", hyperparams_hash(cfg.hp)},
                            {"hyperparams", hyperparams_to_json(cfg.hp)},
                            {"wall_seconds", result.seconds},
                            {"epochs", result.history.size()},
                            {"prototypes", result.model.prototypes.total_count()},
                            {"threshold_clamped", result.threshold_clamped}};
  if (!result.history.empty()) {
    const EpochStats& last = result.history.back();
    summary["final_loss"] = {{"cross_entropy", last.cross_entropy},
                             {"metric", last.metric},
                             {"correlation", last.correlation},
                             {"total", last.total}};
  }
  write_file_atomic(cfg.out / "train_report.json", summary.dump(2) + "\n");
  log << "trained " << result.history.size() << " epochs in " << result.seconds << " s; checkpoint "
      << (cfg.out / "model.ckpt").string() << '\n';
  return kExitOk;
}

int cmd_eval(const RunConfig& cfg, std::ostream& log) {
  validate(cfg, true, true);
  const TrainedModel model = load_checkpoint(cfg.checkpoint);
  const Dataset ds = load_input(cfg);
  const auto start = std::chrono::steady_clock::now();
  EvalReport report;
  report.dataset = dataset_name(cfg);
  report.hyperparams_hash = hyperparams_hash(model.hp);
  report.folds.push_back(evaluate(predict_proba(model, ds.features()), ds.labels(), model.hp.threshold));
  report.mean = report.folds.front();
  report.wall_seconds = seconds_since(start);
  write_report(cfg, "eval_report", report, model.hp);
  log << "accuracy " << report.mean.accuracy << ", micro_f1 " << report.mean.micro_f1 << '\n';
  return kExitOk;
}

int cmd_cv(const RunConfig& cfg, std::ostream& log) {
  validate(cfg, true, false);
  const Dataset ds = load_input(cfg);
  const EvalReport report = run_cv(ds, cfg.hp, cfg.folds, dataset_name(cfg));
  for (std::size_t i = 0; i < report.folds.size(); ++i) {
    EvalReport fold = report;
    fold.folds = {report.folds[i]};
    fold.mean = report.folds[i];
    write_report(cfg, "fold_" + std::to_string(i), fold, cfg.hp);
  }
  write_report(cfg, "cv_report", report, cfg.hp);
  log << cfg.folds << "-fold accuracy " << report.mean.accuracy << ", ranking_loss "
      << report.mean.ranking_loss << '\n';
  return kExitOk;
}

int cmd_grid(const RunConfig& cfg, std::ostream& log) {
  validate(cfg, true, false);
  const Dataset ds = load_input(cfg);
  const auto l1 = cfg.grid_lambda1.empty() ? default_lambda_grid() : cfg.grid_lambda1;
  const auto l2 = cfg.grid_lambda2.empty() ? default_lambda_grid() : cfg.grid_lambda2;
  std::vector<double> alpha = cfg.grid_alpha;
  if (alpha.empty()) alpha = cfg.hp.uses_clustering() ? default_alpha_grid() : std::vector<double>{cfg.hp.alpha};
  const GridResult grid = run_grid(ds, cfg.hp, cfg.folds, l1, l2, alpha, cfg.grid_metric, dataset_name(cfg),
                                   [&](const GridPoint& p) {
                                     log << "lambda1 " << p.lambda1 << " lambda2 " << p.lambda2 << " alpha "
                                         << p.alpha << ": " << to_string(cfg.grid_metric) << ' '
                                         << metric_value(p.report.mean, cfg.grid_metric) << '\n';
                                   });

  const GridPoint& best = grid.points[grid.best];
  Hyperparams best_hp = cfg.hp;
  best_hp.lambda1 = best.lambda1;
  best_hp.lambda2 = best.lambda2;
  best_hp.alpha = best.alpha;
  if (cfg.report_format == ReportFormat::kJson) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
      const GridPoint& p = grid.points[i];
      rows.push_back({{"lambda1", p.lambda1},
                      {"lambda2", p.lambda2},
                      {"alpha", p.alpha},
                      {"hyperparams_hash", p.report.hyperparams_hash},
                      {"aggregate", metrics_to_json(p.report.mean)},
                      {"best", i == grid.best}});
    }
    const nlohmann::json doc = {{"dataset", dataset_name(cfg)},
                                {"hyperparams_hash", hyperparams_hash(cfg.hp)},
                                {"grid_metric", to_string(grid.metric)},
                                {"points", std::move(rows)},
                                {"best", report_to_json(best.report, best_hp)}};
    write_file_atomic(cfg.out / "grid.json", doc.dump(2) + "\n");
  } else {
    std::ostringstream out;
    out << "# dataset\t" << dataset_name(cfg) << '\n'
        << "# hyperparams_hash\t" << hyperparams_hash(cfg.hp) << '\n'
        << "# grid_metric\t" << to_string(grid.metric) << '\n'
        << "lambda1\tlambda2\talpha\thyperparams_hash\taccuracy\tmacro_f1\tmicro_f1\taverage_precision\tranking_loss\tbest\n"
        << std::setprecision(17);
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
      const GridPoint& p = grid.points[i];
      const MetricValues& m = p.report.mean;
      out << p.lambda1 << '\t' << p.lambda2 << '\t' << p.alpha << '\t' << p.report.hyperparams_hash << '\t'
          << m.accuracy << '\t' << m.macro_f1 << '\t' << m.micro_f1 << '\t' << m.average_precision << '\t'
          << m.ranking_loss << '\t' << (i == grid.best ? 1 : 0) << '\n';
    }
    write_file_atomic(cfg.out / "grid.tsv", out.str());
  }
  write_report(cfg, "grid_best", best.report, best_hp);
  log << "best: lambda1 " << best.lambda1 << " lambda2 " << best.lambda2 << " alpha " << best.alpha << '\n';
  return kExitOk;
}

int cmd_gradcheck(const RunConfig& cfg, std::ostream& log) {
  validate(cfg, false, false);
  const GradientCheckReport report =
      gradient_check(cfg.hp, cfg.gradcheck_trials, cfg.gradcheck_tolerance, cfg.hp.seed);
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : report.groups) {
    groups.push_back({{"name", g.name},
                      {"max_rel_error", g.max_rel_error},
                      {"max_abs_analytic", g.max_abs_analytic},
                      {"frozen", g.frozen}});
  }
  const nlohmann::json doc = {{"hyperparams_hash", hyperparams_hash(cfg.hp)},
                              {"hyperparams", hyperparams_to_json(cfg.hp)},
                              {"trials", report.trials},
                              {"tolerance", report.tolerance},
                              {"max_rel_error", report.max_rel_error},
                              {"max_clusters", report.max_clusters},
                              {"passed", report.passed()},
                              {"groups", std::move(groups)}};
  write_file_atomic(cfg.out / "gradcheck.json", doc.dump(2) + "\n");
  log << "gradient check over " << report.trials << " trials: max relative error " << report.max_rel_error
      << (report.passed() ? " (pass)" : " (FAIL)") << '\n';
  return report.passed() ? kExitOk : kExitNumerical;
}

int cmd_export_prototypes(const RunConfig& cfg, std::ostream& log) {
  validate(cfg, !cfg.data.empty(), true);
  TrainedModel model = load_checkpoint(cfg.checkpoint);
  if (!cfg.data.empty()) {
    const Dataset ds = load_input(cfg);
    model.prototypes = build_prototypes(model.params, model.scaler.apply(ds.features()), ds.labels(), model.hp);
  }
  std::ostringstream out;
  export_prototypes(model.prototypes, out);
  write_file_atomic(cfg.out / "prototypes.tsv", out.str());
  log << "exported " << model.prototypes.total_count() << " prototypes\n";
  return kExitOk;
}

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  try {
    if (name == "train") return cmd_train(cfg, log);
    if (name == "eval") return cmd_eval(cfg, log);
    if (name == "cv") return cmd_cv(cfg, log);
    if (name == "grid") return cmd_grid(cfg, log);
    if (name == "gradcheck") return cmd_gradcheck(cfg, log);
    if (name == "export-protos") return cmd_export_prototypes(cfg, log);
    err << "error: unknown command '" << name << "'\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure at batch " << e.batch() << ": " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ParseError& e) {
    err << "error: line " << e.line() << ": " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace pnml
