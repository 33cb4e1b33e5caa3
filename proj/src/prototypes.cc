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

#include "pnml/prototypes.h"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace pnml {
namespace {

// sum_i w_i e_i / sum_i w_i, accumulated in row order.
Vector weighted_mean(const Matrix& embeddings, const Vector& w) {
  Vector acc = Vector::Zero(embeddings.cols());
  double total = 0.0;
  for (Eigen::Index i = 0; i < embeddings.rows(); ++i) {
    acc += w(i) * embeddings.row(i).transpose();
    total += w(i);
  }
  return acc / total;
}

}  // namespace

void validate(const ClusteringConfig& cfg) {
  if (!(cfg.alpha > 0.0) || !(cfg.sigma > 0.0) || !(cfg.rho >= 0.0) || cfg.ite_clustering < 1) {
    throw ConfigError("clustering needs alpha > 0, sigma > 0, rho >= 0, ite_clustering >= 1");
  }
}

double distance_threshold(const ClusteringConfig& cfg, Eigen::Index dim) {
  validate(cfg);
  const double half_dim = 0.5 * static_cast<double>(dim);
  // log(alpha / (1 + rho/sigma)^(M/2)) expanded to avoid overflow for large M.
  const double log_ratio = std::log(cfg.alpha) - half_dim * std::log1p(cfg.rho / cfg.sigma);
  return -2.0 * cfg.sigma * log_ratio;
}

double clustering_threshold(const ClusteringConfig& cfg, Eigen::Index dim) {
  return std::max(distance_threshold(cfg, dim), cfg.lambda_floor);
}

Vector single_prototype(const Matrix& embeddings) {
  if (embeddings.rows() == 0) throw DimensionError("cannot build a prototype from zero embeddings");
  Vector acc = Vector::Zero(embeddings.cols());
  for (Eigen::Index i = 0; i < embeddings.rows(); ++i) acc += embeddings.row(i).transpose();
  return acc / static_cast<double>(embeddings.rows());
}

Vector soft_assign_from_distances(const Vector& distances) {
  if (distances.size() == 0) throw DimensionError("soft assignment needs at least one prototype");
  const double shift = distances.minCoeff();
  Vector z = (-(distances.array() - shift)).exp();
  return z / z.sum();
}

Vector soft_assign(const Vector& e, const Matrix& prototypes, const DistanceFn& dist) {
  Vector d(prototypes.rows());
  for (Eigen::Index c = 0; c < prototypes.rows(); ++c) d(c) = dist(e, prototypes.row(c).transpose());
  return soft_assign_from_distances(d);
}

Clustering adaptive_prototypes(const Matrix& embeddings, const ClusteringConfig& cfg,
                               const DistanceFn& dist, std::optional<double> lambda_override) {
  if (embeddings.rows() == 0) throw DimensionError("cannot cluster zero embeddings");
  validate(cfg);
  const double lambda = lambda_override ? *lambda_override : clustering_threshold(cfg, embeddings.cols());
  const Eigen::Index n = embeddings.rows();

  std::vector<Vector> centers{single_prototype(embeddings)};
  Matrix z;  // n x C
  for (int pass = 0; pass < cfg.ite_clustering; ++pass) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vector e = embeddings.row(i).transpose();
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& mu : centers) nearest = std::min(nearest, dist(e, mu));
      if (nearest > lambda) centers.push_back(e);
    }

    const auto c_count = static_cast<Eigen::Index>(centers.size());
    z.resize(n, c_count);
    Vector d(c_count);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vector e = embeddings.row(i).transpose();
      for (Eigen::Index c = 0; c < c_count; ++c) d(c) = dist(e, centers[c]);
      z.row(i) = soft_assign_from_distances(d).transpose();
    }

    std::vector<Vector> moved;
    Matrix kept(n, 0);
    for (Eigen::Index c = 0; c < c_count; ++c) {
      if (!(z.col(c).sum() > 0.0)) continue;
      moved.push_back(weighted_mean(embeddings, z.col(c)));
      kept.conservativeResize(Eigen::NoChange, kept.cols() + 1);
      kept.col(kept.cols() - 1) = z.col(c);
    }
    centers = std::move(moved);
    z = std::move(kept);
  }

  Clustering out;
  out.prototypes.resize(static_cast<Eigen::Index>(centers.size()), embeddings.cols());
  out.weights.resize(static_cast<Eigen::Index>(centers.size()), n);
  for (Eigen::Index c = 0; c < out.prototypes.rows(); ++c) {
    out.prototypes.row(c) = centers[c].transpose();
    out.weights.row(c) = (z.col(c) / z.col(c).sum()).transpose();
  }
  return out;
}

std::size_t PrototypeSet::total_count() const {
  std::size_t total = 0;
  for (const auto& l : labels) total += static_cast<std::size_t>(l.pos.rows() + l.neg.rows());
  return total;
}

void export_prototypes(const PrototypeSet& set, std::ostream& out) {
  Eigen::Index dim = 0;
  for (const auto& l : set.labels) dim = std::max({dim, l.pos.cols(), l.neg.cols()});
  out << "label\tpolarity\tcluster\twarnings";
  for (Eigen::Index j = 0; j < dim; ++j) out << "\tx" << j;
  out << '\n' << std::setprecision(17);

  auto write = [&](std::size_t k, const char* polarity, const Matrix& protos, const std::string& warn) {
    for (Eigen::Index c = 0; c < protos.rows(); ++c) {
      out << k << '\t' << polarity << '\t' << c << '\t' << (warn.empty() ? "-" : warn);
      for (Eigen::Index j = 0; j < protos.cols(); ++j) out << '\t' << protos(c, j);
      out << '\n';
    }
  };
  for (std::size_t k = 0; k < set.labels.size(); ++k) {
    const auto& l = set.labels[k];
    const std::string warn = l.pos.rows() == 0 ? "no_positive_prototypes" : "";
    write(k, "pos", l.pos, warn);
    write(k, "neg", l.neg, warn);
  }
}

}  // namespace pnml
