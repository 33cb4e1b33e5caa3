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

#include "pnml/model.h"

#include <cmath>

#include "pnml/random.h"

namespace pnml {

Mode parse_mode(const std::string& name) {
  if (name == "single") return Mode::kSingle;
  if (name == "multiple") return Mode::kMultiple;
  if (name == "ablation-i") return Mode::kAblationI;
  if (name == "ablation-d") return Mode::kAblationD;
  throw ConfigError("unknown mode '" + name + "' (expected single|multiple|ablation-i|ablation-d)");
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::kSingle:
      return "single";
    case Mode::kMultiple:
      return "multiple";
    case Mode::kAblationI:
      return "ablation-i";
    case Mode::kAblationD:
      return "ablation-d";
  }
  return "single";
}

ClusteringConfig Hyperparams::clustering(double sigma_now) const {
  return {alpha, sigma_now, rho, ite_clustering, lambda_floor};
}

void validate(const Hyperparams& hp) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(hp.embedding_dim >= 0, "embedding_dim must be >= 0 (0 selects automatically)");
  require(hp.beta > 0.0 && hp.beta < 1.0, "beta must lie in (0, 1)");
  require(hp.alpha > 0.0, "alpha must be > 0");
  require(hp.lambda1 >= 0.0 && hp.lambda2 >= 0.0, "lambda1 and lambda2 must be >= 0");
  require(hp.rho >= 0.0, "rho must be >= 0");
  require(hp.sigma > 0.0, "sigma must be > 0");
  require(hp.ite_clustering >= 1, "ite_clustering must be >= 1");
  require(hp.lambda_floor > 0.0, "lambda_floor must be > 0");
  require(hp.r_pos > 0.0 && hp.r_pos <= 1.0, "r_pos must lie in (0, 1]");
  require(hp.r_neg > 0.0 && hp.r_neg <= 1.0, "r_neg must lie in (0, 1]");
  require(hp.batch_size >= 1, "batch_size must be >= 1");
  require(hp.epochs >= 0, "epochs must be >= 0");
  require(hp.learning_rate > 0.0, "learning_rate must be > 0");
  require(hp.distance_power == 1 || hp.distance_power == 2, "distance_power must be 1 or 2");
  require(hp.threshold > 0.0 && hp.threshold < 1.0, "threshold must lie in (0, 1)");
}

Eigen::Index resolve_embedding_dim(const Hyperparams& hp, Eigen::Index num_features) {
  return hp.embedding_dim > 0 ? hp.embedding_dim : embedding_dim(num_features);
}

FeatureScaler FeatureScaler::fit(const Matrix& x) {
  FeatureScaler s;
  s.mean = x.colwise().mean().transpose();
  s.scale.resize(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double var = (x.col(j).array() - s.mean(j)).square().mean();
    s.scale(j) = var > 1e-24 ? std::sqrt(var) : 1.0;
  }
  return s;
}

FeatureScaler FeatureScaler::identity(Eigen::Index dim) {
  return {Vector::Zero(dim), Vector::Ones(dim)};
}

Matrix FeatureScaler::apply(const Matrix& x) const {
  if (x.cols() != mean.size()) throw DimensionError("scaler fitted on a different feature count");
  return (x.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

ModelParams init_model(Eigen::Index num_features, Eigen::Index num_labels, const Hyperparams& hp,
                       std::uint64_t seed) {
  validate(hp);
  const Eigen::Index m = resolve_embedding_dim(hp, num_features);
  ModelParams p;
  const Eigen::Index copies = hp.shares_embedding() ? 1 : num_labels;
  for (Eigen::Index g = 0; g < copies; ++g) {
    p.embeddings.push_back(init_embedding(num_features, m, hp.beta, derive_seed(seed, "embedding", g)));
  }
  p.metric = DistanceMetricParams::identity(num_labels, m);
  p.log_sigma = std::log(hp.sigma);
  return p;
}

ModelParams zeros_like(const ModelParams& p) {
  ModelParams z = p;
  for (auto& e : z.embeddings) {
    e.weight.setZero();
    e.bias.setZero();
  }
  for (auto& u : z.metric.u) u.setZero();
  z.log_sigma = 0.0;
  return z;
}

namespace {

template <typename Params, typename Fn>
void visit_tensors(Params& p, Fn&& fn) {
  for (auto& e : p.embeddings) {
    fn(e.weight);
    fn(e.bias);
  }
  for (auto& u : p.metric.u) fn(u);
}

Eigen::Index flat_size(const ModelParams& p) {
  Eigen::Index n = 1;
  for (const auto& e : p.embeddings) n += e.weight.size() + e.bias.size();
  for (const auto& u : p.metric.u) n += u.size();
  return n;
}

}  // namespace

Vector flatten(const ModelParams& p) {
  Vector flat(flat_size(p));
  Eigen::Index at = 0;
  visit_tensors(p, [&](const auto& t) {
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      for (Eigen::Index c = 0; c < t.cols(); ++c) flat(at++) = t(r, c);
    }
  });
  flat(at) = p.log_sigma;
  return flat;
}

void unflatten(const Vector& flat, ModelParams& p) {
  if (flat.size() != flat_size(p)) throw DimensionError("flat parameter vector has the wrong size");
  Eigen::Index at = 0;
  visit_tensors(p, [&](auto& t) {
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      for (Eigen::Index c = 0; c < t.cols(); ++c) t(r, c) = flat(at++);
    }
  });
  p.log_sigma = flat(at);
}

std::vector<ParamGroup> param_groups(const ModelParams& p) {
  std::vector<ParamGroup> groups;
  Eigen::Index at = 0;
  for (std::size_t g = 0; g < p.embeddings.size(); ++g) {
    const auto& e = p.embeddings[g];
    const std::string suffix = p.embeddings.size() == 1 ? "" : "[" + std::to_string(g) + "]";
    groups.push_back({"W" + suffix, at, e.weight.size()});
    at += e.weight.size();
    groups.push_back({"b" + suffix, at, e.bias.size()});
    at += e.bias.size();
  }
  for (std::size_t k = 0; k < p.metric.u.size(); ++k) {
    groups.push_back({"U[" + std::to_string(k) + "]", at, p.metric.u[k].size()});
    at += p.metric.u[k].size();
  }
  groups.push_back({"log_sigma", at, 1});
  return groups;
}

}  // namespace pnml
