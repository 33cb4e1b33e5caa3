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

#include "pnml/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <unordered_map>

#include "pnml/adam.h"
#include "pnml/random.h"

namespace pnml {
namespace {

Matrix gather_rows(const Matrix& x, const IndexList& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
  return out;
}

Matrix uniform_weights(Eigen::Index n) {
  return Matrix::Constant(1, n, 1.0 / static_cast<double>(n));
}

// Distance on transformed rows: squared Euclidean, or its root for power 1.
double transformed_distance(const Eigen::Ref<const RowVector>& t, const Eigen::Ref<const RowVector>& nu,
                            int power) {
  const double sq = (t - nu).squaredNorm();
  return power == 1 ? std::sqrt(sq) : sq;
}

Vector softmax_neg(const Eigen::Ref<const RowVector>& d) { return soft_assign_from_distances(d.transpose()); }

bool all_finite(const ModelParams& p) {
  for (const auto& e : p.embeddings) {
    if (!e.weight.allFinite() || !e.bias.allFinite()) return false;
  }
  for (const auto& u : p.metric.u) {
    if (!u.allFinite()) return false;
  }
  return std::isfinite(p.log_sigma);
}

// Accumulates dL/dt for one query against one prototype list. `sign` is -1
// for positive prototypes (s rises as they get closer) and +1 for negatives.
void accumulate_query(double grad_s, double sign, const Eigen::Ref<const RowVector>& t,
                      const Matrix& tproto, const Eigen::Ref<const RowVector>& dist, int power,
                      Matrix& grad_t, Eigen::Index at, Matrix& grad_tproto) {
  const Vector a = softmax_neg(dist);
  for (Eigen::Index c = 0; c < tproto.rows(); ++c) {
    const double grad_d = sign * grad_s * a(c);
    double grad_sq = grad_d;
    if (power == 1) grad_sq = dist(c) > 0.0 ? grad_d / (2.0 * dist(c)) : 0.0;
    const RowVector step = 2.0 * grad_sq * (t - tproto.row(c));
    grad_t.row(at) += step;
    grad_tproto.row(c) -= step;
  }
}

}  // namespace

IterationPlan IterationPlan::full(const LabelMatrix& labels) {
  IterationPlan plan;
  IndexList all(static_cast<std::size_t>(labels.rows()));
  for (Eigen::Index i = 0; i < labels.rows(); ++i) all[static_cast<std::size_t>(i)] = i;
  for (Eigen::Index k = 0; k < labels.cols(); ++k) {
    LabelPlan lp;
    for (Eigen::Index i = 0; i < labels.rows(); ++i) (labels(i, k) == 1 ? lp.pos : lp.neg).push_back(i);
    lp.queries = all;
    plan.labels.push_back(std::move(lp));
  }
  return plan;
}

LabelForward forward_label(const ModelParams& model, const Matrix& x, const LabelMatrix& y,
                           Eigen::Index k, const LabelPlan& plan, const Hyperparams& hp,
                           const LabelClusters* frozen, std::optional<double> lambda_override) {
  LabelForward f;
  f.label = k;
  if (plan.pos.empty() || plan.neg.empty()) return f;
  f.active = true;
  f.pool = plan.pos;
  f.pool.insert(f.pool.end(), plan.neg.begin(), plan.neg.end());
  f.n_pos = static_cast<Eigen::Index>(plan.pos.size());
  const Eigen::Index n_neg = static_cast<Eigen::Index>(plan.neg.size());

  f.x = gather_rows(x, f.pool);
  f.embedding = embed_rows(model.embedding_for(k), f.x);
  const Matrix& u = model.metric.u[static_cast<std::size_t>(k)];
  f.transformed = f.embedding.output * u.transpose();

  if (frozen != nullptr) {
    if (frozen->pos_weights.cols() != f.n_pos || frozen->neg_weights.cols() != n_neg) {
      throw DimensionError("frozen cluster weights do not match the label's pools");
    }
    f.clusters = *frozen;
  } else if (hp.uses_clustering()) {
    const ClusteringConfig cfg = hp.clustering(std::exp(model.log_sigma));
    f.threshold_clamped = !lambda_override && distance_threshold(cfg, u.rows()) < cfg.lambda_floor;
    const int power = hp.distance_power;
    const DistanceFn dist = [power](const Vector& a, const Vector& b) {
      return transformed_distance(a.transpose(), b.transpose(), power);
    };
    f.clusters.pos_weights =
        adaptive_prototypes(f.transformed.topRows(f.n_pos), cfg, dist, lambda_override).weights;
    f.clusters.neg_weights =
        adaptive_prototypes(f.transformed.bottomRows(n_neg), cfg, dist, lambda_override).weights;
  } else {
    f.clusters.pos_weights = uniform_weights(f.n_pos);
    f.clusters.neg_weights = uniform_weights(n_neg);
  }

  f.proto_pos = f.clusters.pos_weights * f.embedding.output.topRows(f.n_pos);
  f.proto_neg = f.clusters.neg_weights * f.embedding.output.bottomRows(n_neg);
  f.tproto_pos = f.clusters.pos_weights * f.transformed.topRows(f.n_pos);
  f.tproto_neg = f.clusters.neg_weights * f.transformed.bottomRows(n_neg);

  std::unordered_map<Eigen::Index, Eigen::Index> position;
  for (std::size_t i = 0; i < f.pool.size(); ++i) position.emplace(f.pool[i], static_cast<Eigen::Index>(i));

  const auto q_count = static_cast<Eigen::Index>(plan.queries.size());
  f.query_at.resize(plan.queries.size());
  f.query_labels.resize(q_count);
  f.dist_pos.resize(q_count, f.tproto_pos.rows());
  f.dist_neg.resize(q_count, f.tproto_neg.rows());
  f.probabilities.resize(q_count);
  for (Eigen::Index q = 0; q < q_count; ++q) {
    const Eigen::Index row = plan.queries[static_cast<std::size_t>(q)];
    const auto it = position.find(row);
    if (it == position.end()) throw DimensionError("query row is not part of the label's pools");
    f.query_at[static_cast<std::size_t>(q)] = it->second;
    const auto t = f.transformed.row(it->second);
    for (Eigen::Index c = 0; c < f.tproto_pos.rows(); ++c) {
      f.dist_pos(q, c) = transformed_distance(t, f.tproto_pos.row(c), hp.distance_power);
    }
    for (Eigen::Index c = 0; c < f.tproto_neg.rows(); ++c) {
      f.dist_neg(q, c) = transformed_distance(t, f.tproto_neg.row(c), hp.distance_power);
    }
    const double s = log_mean_exp_neg(f.dist_pos.row(q).transpose()) -
                     log_mean_exp_neg(f.dist_neg.row(q).transpose());
    const double p = stable_sigmoid(s);
    const bool positive = y(row, k) == 1;
    f.query_labels(q) = positive ? 1.0 : 0.0;
    f.probabilities(q) = p;
    const double pc = std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
    f.cross_entropy -= positive ? std::log(pc) : std::log1p(-pc);
  }
  return f;
}

IterationResult run_iteration(const ModelParams& model, const Matrix& x, const LabelMatrix& y,
                              const IterationPlan& plan, const CorrelationMatrix& corr,
                              const Hyperparams& hp, bool compute_grad,
                              const std::vector<LabelClusters>* frozen,
                              std::optional<double> lambda_override) {
  const Eigen::Index k_count = model.num_labels();
  if (static_cast<Eigen::Index>(plan.labels.size()) != k_count || y.cols() != k_count ||
      corr.c.rows() != k_count) {
    throw DimensionError("iteration plan, labels and correlations disagree on the label count");
  }
  if (frozen != nullptr && static_cast<Eigen::Index>(frozen->size()) != k_count) {
    throw DimensionError("frozen clusters must cover every label");
  }

  IterationResult result;
  std::vector<LabelForward> forward;
  forward.reserve(static_cast<std::size_t>(k_count));
  double ce = 0.0;
  for (Eigen::Index k = 0; k < k_count; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    forward.push_back(forward_label(model, x, y, k, plan.labels[ks], hp,
                                    frozen != nullptr ? &(*frozen)[ks] : nullptr, lambda_override));
    const LabelForward& f = forward.back();
    ce += f.cross_entropy;
    result.label_cross_entropy.push_back(f.cross_entropy);
    result.clusters.push_back(f.clusters);
    result.threshold_clamped = result.threshold_clamped || f.threshold_clamped;
    result.prototypes.labels.push_back({f.proto_pos, f.proto_neg});
  }

  // Mean positive prototype per active label, for L_c.
  std::vector<Vector> means(static_cast<std::size_t>(k_count));
  for (Eigen::Index k = 0; k < k_count; ++k) {
    const LabelForward& f = forward[static_cast<std::size_t>(k)];
    if (f.active) means[static_cast<std::size_t>(k)] = f.proto_pos.colwise().mean().transpose();
  }
  double lc = 0.0;
  std::vector<Vector> grad_means(static_cast<std::size_t>(k_count));
  for (Eigen::Index j = 0; j < k_count; ++j) {
    const auto js = static_cast<std::size_t>(j);
    if (means[js].size() == 0) continue;
    grad_means[js] = Vector::Zero(means[js].size());
    for (Eigen::Index k = 0; k < k_count; ++k) {
      const auto kss = static_cast<std::size_t>(k);
      if (means[kss].size() == 0) continue;
      const double w = 1.0 - corr.c(j, k);
      lc += 0.5 * w * means[js].dot(means[kss]);
      grad_means[js] += hp.lambda2 * w * means[kss];
    }
  }
  const double lm = metric_regularizer(model.metric);
  result.loss = make_breakdown(ce, lm, lc, hp.lambda1, hp.lambda2);
  if (!compute_grad) return result;

  ModelParams grad = zeros_like(model);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    const LabelForward& f = forward[ks];
    if (!f.active) continue;
    const Matrix& u = model.metric.u[ks];
    const Eigen::Index n = static_cast<Eigen::Index>(f.pool.size());
    const Eigen::Index n_neg = n - f.n_pos;

    Matrix grad_t = Matrix::Zero(n, u.rows());
    Matrix grad_tpos = Matrix::Zero(f.tproto_pos.rows(), f.tproto_pos.cols());
    Matrix grad_tneg = Matrix::Zero(f.tproto_neg.rows(), f.tproto_neg.cols());
    for (Eigen::Index q = 0; q < f.probabilities.size(); ++q) {
      const double p = f.probabilities(q);
      // The clamp in the log is flat outside [1e-7, 1 - 1e-7].
      if (p < kProbabilityClamp || p > 1.0 - kProbabilityClamp) continue;
      const double grad_s = p - f.query_labels(q);
      const Eigen::Index at = f.query_at[static_cast<std::size_t>(q)];
      const auto t = f.transformed.row(at);
      accumulate_query(grad_s, -1.0, t, f.tproto_pos, f.dist_pos.row(q), hp.distance_power,
                       grad_t, at, grad_tpos);
      accumulate_query(grad_s, 1.0, t, f.tproto_neg, f.dist_neg.row(q), hp.distance_power,
                       grad_t, at, grad_tneg);
    }
    grad_t.topRows(f.n_pos) += f.clusters.pos_weights.transpose() * grad_tpos;
    grad_t.bottomRows(n_neg) += f.clusters.neg_weights.transpose() * grad_tneg;

    Matrix grad_e = grad_t * u;
    if (hp.learns_metric()) grad.metric.u[ks] += grad_t.transpose() * f.embedding.output;
    if (grad_means[ks].size() > 0) {
      const RowVector w_bar = f.clusters.pos_weights.colwise().mean();
      grad_e.topRows(f.n_pos) += w_bar.transpose() * grad_means[ks].transpose();
    }
    auto& ge = grad.embeddings[model.embedding_index(k)];
    embed_rows_backward(model.embedding_for(k), f.x, f.embedding, grad_e, ge.weight, ge.bias);
  }
  if (hp.learns_metric()) {
    for (std::size_t k = 0; k < model.metric.u.size(); ++k) {
      grad.metric.u[k] += 2.0 * hp.lambda1 * model.metric.u[k];
    }
  }
  result.grad = std::move(grad);
  return result;
}

PrototypeSet build_prototypes(const ModelParams& model, const Matrix& x, const LabelMatrix& y,
                              const Hyperparams& hp, std::optional<double> lambda_override) {
  const IterationPlan full = IterationPlan::full(y);
  PrototypeSet set;
  for (Eigen::Index k = 0; k < model.num_labels(); ++k) {
    LabelPlan lp = full.labels[static_cast<std::size_t>(k)];
    lp.queries.clear();
    if (lp.pos.empty() || lp.neg.empty()) {
      // One-sided labels keep whatever side exists as a plain mean.
      LabelPrototypes protos;
      const Eigen::Index m = model.dim();
      protos.pos.resize(0, m);
      protos.neg.resize(0, m);
      const EmbeddingParams& emb = model.embedding_for(k);
      if (!lp.pos.empty()) protos.pos = single_prototype(embed_rows(emb, gather_rows(x, lp.pos)).output).transpose();
      if (!lp.neg.empty()) protos.neg = single_prototype(embed_rows(emb, gather_rows(x, lp.neg)).output).transpose();
      set.labels.push_back(std::move(protos));
      continue;
    }
    const LabelForward f = forward_label(model, x, y, k, lp, hp, nullptr, lambda_override);
    set.labels.push_back({f.proto_pos, f.proto_neg});
  }
  return set;
}

Matrix predict_proba(const TrainedModel& model, const Matrix& raw_features) {
  const Matrix x = model.scaler.apply(raw_features);
  const Eigen::Index k_count = model.params.num_labels();
  if (static_cast<Eigen::Index>(model.prototypes.labels.size()) != k_count) {
    throw DimensionError("prototype set does not match the model's label count");
  }
  Matrix out(x.rows(), k_count);
  const int power = model.hp.distance_power;
  for (Eigen::Index k = 0; k < k_count; ++k) {
    const LabelPrototypes& protos = model.prototypes.labels[static_cast<std::size_t>(k)];
    if (protos.pos.rows() == 0) {
      out.col(k).setZero();
      continue;
    }
    if (protos.neg.rows() == 0) {
      out.col(k).setOnes();
      continue;
    }
    const Matrix& u = model.params.metric.u[static_cast<std::size_t>(k)];
    const Matrix t = embed_rows(model.params.embedding_for(k), x).output * u.transpose();
    const Matrix tpos = protos.pos * u.transpose();
    const Matrix tneg = protos.neg * u.transpose();
    Vector dpos(tpos.rows());
    Vector dneg(tneg.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      for (Eigen::Index c = 0; c < tpos.rows(); ++c) dpos(c) = transformed_distance(t.row(i), tpos.row(c), power);
      for (Eigen::Index c = 0; c < tneg.rows(); ++c) dneg(c) = transformed_distance(t.row(i), tneg.row(c), power);
      out(i, k) = stable_sigmoid(log_mean_exp_neg(dpos) - log_mean_exp_neg(dneg));
    }
  }
  return out;
}

TrainResult train(const Dataset& train_set, const Hyperparams& hp, std::optional<double> lambda_override) {
  validate(hp);
  const auto started = std::chrono::steady_clock::now();
  TrainResult result;
  TrainedModel& model = result.model;
  model.hp = hp;
  model.scaler = hp.standardize ? FeatureScaler::fit(train_set.features())
                                : FeatureScaler::identity(train_set.num_features());
  const Matrix x = model.scaler.apply(train_set.features());
  const LabelMatrix& y = train_set.labels();
  const Eigen::Index k_count = train_set.num_labels();
  model.params = init_model(train_set.num_features(), k_count, hp, hp.seed);
  const CorrelationMatrix corr = label_correlation_matrix(train_set);

  std::vector<IndexList> positives(static_cast<std::size_t>(k_count));
  std::vector<IndexList> negatives(static_cast<std::size_t>(k_count));
  for (Eigen::Index k = 0; k < k_count; ++k) {
    positives[static_cast<std::size_t>(k)] = train_set.positives(k);
    negatives[static_cast<std::size_t>(k)] = train_set.negatives(k);
  }

  Vector theta = flatten(model.params);
  AdamState adam = AdamState::for_size(theta.size());
  long batch = 0;
  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    std::vector<LabelPlan> pools(static_cast<std::size_t>(k_count));
    std::vector<std::vector<IndexList>> chunks(static_cast<std::size_t>(k_count));
    std::size_t iterations = 0;
    const std::uint64_t epoch_seed = derive_seed(hp.seed, "sampling", static_cast<std::uint64_t>(epoch));
    for (Eigen::Index k = 0; k < k_count; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      if (positives[ks].empty() || negatives[ks].empty()) continue;
      const auto e = static_cast<std::uint64_t>(epoch);
      const auto kk = static_cast<std::uint64_t>(k);
      const LabelSample sample = sample_label_instances(train_set, k, {hp.r_pos, hp.r_neg, epoch_seed});
      pools[ks].pos = sample.pos;
      pools[ks].neg = sample.neg;
      IndexList order = pools[ks].pos;
      order.insert(order.end(), pools[ks].neg.begin(), pools[ks].neg.end());
      Rng rng(derive_seed(hp.seed, "queries", e, kk));
      rng.shuffle(order);
      const auto b = static_cast<std::size_t>(hp.batch_size);
      for (std::size_t at = 0; at < order.size(); at += b) {
        chunks[ks].emplace_back(order.begin() + static_cast<std::ptrdiff_t>(at),
                                order.begin() + static_cast<std::ptrdiff_t>(std::min(order.size(), at + b)));
      }
      iterations = std::max(iterations, chunks[ks].size());
    }

    EpochStats stats;
    for (std::size_t it = 0; it < iterations; ++it, ++batch) {
      IterationPlan plan;
      plan.labels.resize(static_cast<std::size_t>(k_count));
      for (std::size_t k = 0; k < plan.labels.size(); ++k) {
        if (chunks[k].empty()) continue;
        plan.labels[k] = pools[k];
        plan.labels[k].queries = chunks[k][it % chunks[k].size()];
      }
      const IterationResult r = run_iteration(model.params, x, y, plan, corr, hp, true, nullptr, lambda_override);
      result.threshold_clamped = result.threshold_clamped || r.threshold_clamped;
      if (!std::isfinite(r.loss.total) || !all_finite(*r.grad)) {
        throw NumericalError("non-finite loss or gradient in epoch " + std::to_string(epoch), batch);
      }
      stats.cross_entropy += r.loss.cross_entropy;
      stats.metric += r.loss.metric;
      stats.correlation += r.loss.correlation;
      stats.total += r.loss.total;
      ++stats.iterations;

      adam_step(adam, theta, flatten(*r.grad), hp.learning_rate);
      unflatten(theta, model.params);
    }
    if (stats.iterations > 0) {
      const auto n = static_cast<double>(stats.iterations);
      stats.cross_entropy /= n;
      stats.metric /= n;
      stats.correlation /= n;
      stats.total /= n;
    }
    for (const auto& u : model.params.metric.u) stats.metric_norms.push_back(u.norm());
    result.history.push_back(std::move(stats));
  }

  model.prototypes = build_prototypes(model.params, x, y, hp, lambda_override);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

double gradient_relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), kGradCheckFloor});
}

GradientCheckReport gradient_check(const Hyperparams& base, int trial_count, double tolerance,
                                   std::uint64_t seed) {
  constexpr double kStep = 1e-5;
  std::map<std::string, GradientGroupReport> groups;
  std::vector<std::string> order;
  GradientCheckReport report;
  report.tolerance = tolerance;
  for (int trial = 0; trial < trial_count; ++trial) {
    Rng rng(derive_seed(seed, "gradcheck", static_cast<std::uint64_t>(trial)));
    const auto n = static_cast<Eigen::Index>(3 + rng.below(6));   // 3..8
    const auto d = static_cast<Eigen::Index>(2 + rng.below(4));   // 2..5
    const auto kc = static_cast<Eigen::Index>(1 + rng.below(3));  // 1..3
    const auto m = static_cast<Eigen::Index>(2 + rng.below(3));   // 2..4

    Matrix x(n, d);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1.0, 1.0);
    LabelMatrix y(n, kc);
    for (Eigen::Index i = 0; i < y.size(); ++i) y.data()[i] = rng.uniform() < 0.5 ? 1 : 0;
    for (Eigen::Index k = 0; k < kc; ++k) {
      // Every label needs both sides for a defined loss.
      const auto a = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
      auto b = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n - 1)));
      if (b >= a) ++b;
      y(a, k) = 1;
      y(b, k) = 0;
    }

    Hyperparams hp = base;
    hp.embedding_dim = m;
    hp.lambda1 = rng.uniform(0.05, 0.5);
    hp.lambda2 = rng.uniform(0.05, 0.5);
    hp.sigma = rng.uniform(0.2, 1.0);
    ModelParams model = init_model(d, kc, hp, rng.next());
    for (auto& e : model.embeddings) {
      for (Eigen::Index i = 0; i < e.bias.size(); ++i) e.bias(i) = rng.uniform(-0.5, 0.5);
    }
    if (hp.learns_metric()) {
      for (auto& u : model.metric.u) {
        for (Eigen::Index i = 0; i < u.size(); ++i) u.data()[i] += rng.uniform(-0.5, 0.5);
      }
    }

    const Dataset ds(x, y);
    const CorrelationMatrix corr = label_correlation_matrix(ds);
    const IterationPlan plan = IterationPlan::full(y);
    const IterationResult base_run = run_iteration(model, x, y, plan, corr, hp, true);
    for (const auto& c : base_run.clusters) {
      report.max_clusters = std::max({report.max_clusters, c.pos_weights.rows(), c.neg_weights.rows()});
    }
    const Vector analytic = flatten(*base_run.grad);
    const Vector theta = flatten(model);

    ModelParams probe = model;
    for (const ParamGroup& g : param_groups(model)) {
      auto [it, inserted] = groups.try_emplace(g.name);
      if (inserted) {
        it->second.name = g.name;
        order.push_back(g.name);
      }
      GradientGroupReport& rep = it->second;
      const bool frozen = (g.name.rfind("U[", 0) == 0 && !hp.learns_metric()) || g.name == "log_sigma";
      rep.frozen = frozen;
      for (Eigen::Index j = g.offset; j < g.offset + g.size; ++j) {
        rep.max_abs_analytic = std::max(rep.max_abs_analytic, std::abs(analytic(j)));
        if (frozen) continue;
        Vector shifted = theta;
        shifted(j) = theta(j) + kStep;
        unflatten(shifted, probe);
        const double up = run_iteration(probe, x, y, plan, corr, hp, false, &base_run.clusters).loss.total;
        shifted(j) = theta(j) - kStep;
        unflatten(shifted, probe);
        const double down = run_iteration(probe, x, y, plan, corr, hp, false, &base_run.clusters).loss.total;
        const double numeric = (up - down) / (2.0 * kStep);
        const double err = gradient_relative_error(analytic(j), numeric);
        rep.max_rel_error = std::max(rep.max_rel_error, err);
        report.max_rel_error = std::max(report.max_rel_error, err);
      }
    }
    ++report.trials;
  }
  for (const auto& name : order) report.groups.push_back(groups[name]);
  return report;
}

}  // namespace pnml
