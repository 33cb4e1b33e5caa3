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

#include "pnml/checkpoint.h"

#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "pnml/config.h"
#include "pnml/report.h"

namespace pnml {
namespace {

void write_tensor(std::ostream& out, const std::string& name, const Matrix& t) {
  out << "tensor " << name << ' ' << t.rows() << ' ' << t.cols() << '\n';
  for (Eigen::Index r = 0; r < t.rows(); ++r) {
    for (Eigen::Index c = 0; c < t.cols(); ++c) out << (c ? " " : "") << t(r, c);
    out << '\n';
  }
}

Matrix as_column(const Vector& v) { return v; }

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::string next(const char* expecting) {
    std::string line;
    if (!std::getline(in_, line)) throw ParseError(std::string("unexpected end of checkpoint, expected ") + expecting, line_ + 1);
    ++line_;
    return line;
  }

  bool eof() {
    return in_.peek() == std::char_traits<char>::eof();
  }

  long line() const { return line_; }

 private:
  std::istream& in_;
  long line_ = 0;
};

std::map<std::string, Matrix> read_tensors(LineReader& reader) {
  std::map<std::string, Matrix> tensors;
  while (!reader.eof()) {
    const std::string header = reader.next("tensor header");
    if (header.empty()) continue;
    std::istringstream hs(header);
    std::string tag, name;
    long long rows = -1, cols = -1;
    if (!(hs >> tag >> name >> rows >> cols) || tag != "tensor" || rows < 0 || cols < 0) {
      throw ParseError("malformed tensor header '" + header + "'", reader.line());
    }
    Matrix t(rows, cols);
    for (long long r = 0; r < rows; ++r) {
      std::istringstream rs(reader.next("tensor row"));
      for (long long c = 0; c < cols; ++c) {
        if (!(rs >> t(r, c))) throw ParseError("tensor " + name + " has a short row", reader.line());
      }
      std::string extra;
      if (rs >> extra) throw ParseError("tensor " + name + " has a long row", reader.line());
    }
    if (!tensors.emplace(name, std::move(t)).second) {
      throw ParseError("duplicate tensor " + name, reader.line());
    }
  }
  return tensors;
}

Matrix take(std::map<std::string, Matrix>& tensors, const std::string& name, Eigen::Index rows,
            Eigen::Index cols) {
  const auto it = tensors.find(name);
  if (it == tensors.end()) throw ParseError("checkpoint is missing tensor " + name, 0);
  if ((rows >= 0 && it->second.rows() != rows) || (cols >= 0 && it->second.cols() != cols)) {
    throw ParseError("tensor " + name + " has the wrong shape", 0);
  }
  Matrix t = std::move(it->second);
  tensors.erase(it);
  return t;
}

}  // namespace

void save_checkpoint(const TrainedModel& model, std::ostream& out) {
  const ModelParams& p = model.params;
  out << "PNML-CHECKPOINT " << kCheckpointVersion << '\n';
  out << "hyperparams " << hyperparams_to_json(model.hp).dump() << '\n';
  out << "shape " << model.scaler.mean.size() << ' ' << p.dim() << ' ' << p.num_labels() << ' '
      << p.embeddings.size() << '\n';
  out << std::setprecision(17);
  write_tensor(out, "scaler.mean", as_column(model.scaler.mean));
  write_tensor(out, "scaler.scale", as_column(model.scaler.scale));
  for (std::size_t g = 0; g < p.embeddings.size(); ++g) {
    const std::string prefix = "embedding[" + std::to_string(g) + "].";
    write_tensor(out, prefix + "weight", p.embeddings[g].weight);
    write_tensor(out, prefix + "bias", as_column(p.embeddings[g].bias));
  }
  for (std::size_t k = 0; k < p.metric.u.size(); ++k) {
    write_tensor(out, "metric[" + std::to_string(k) + "]", p.metric.u[k]);
  }
  write_tensor(out, "log_sigma", Matrix::Constant(1, 1, p.log_sigma));
  for (std::size_t k = 0; k < model.prototypes.labels.size(); ++k) {
    const std::string prefix = "prototypes[" + std::to_string(k) + "].";
    write_tensor(out, prefix + "pos", model.prototypes.labels[k].pos);
    write_tensor(out, prefix + "neg", model.prototypes.labels[k].neg);
  }
}

void save_checkpoint(const TrainedModel& model, const std::filesystem::path& path) {
  std::ostringstream out;
  save_checkpoint(model, out);
  write_file_atomic(path, out.str());
}

TrainedModel load_checkpoint(std::istream& in) {
  LineReader reader(in);
  {
    std::istringstream hs(reader.next("checkpoint header"));
    std::string magic;
    int version = 0;
    if (!(hs >> magic >> version) || magic != "PNML-CHECKPOINT") {
      throw ParseError("not a PNML checkpoint", reader.line());
    }
    if (version != kCheckpointVersion) {
      throw ParseError("unsupported checkpoint version " + std::to_string(version), reader.line());
    }
  }
  TrainedModel model;
  {
    const std::string line = reader.next("hyperparams");
    const std::string tag = "hyperparams ";
    if (line.rfind(tag, 0) != 0) throw ParseError("expected hyperparams line", reader.line());
    try {
      model.hp = hyperparams_from_json(nlohmann::json::parse(line.substr(tag.size())));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("invalid hyperparams: ") + e.what(), reader.line());
    } catch (const ConfigError& e) {
      throw ParseError(std::string("invalid hyperparams: ") + e.what(), reader.line());
    }
  }
  long long d = 0, m = 0, k_count = 0, groups = 0;
  {
    std::istringstream ss(reader.next("shape"));
    std::string tag;
    if (!(ss >> tag >> d >> m >> k_count >> groups) || tag != "shape" || d < 1 || m < 1 || k_count < 1 ||
        (groups != 1 && groups != k_count)) {
      throw ParseError("malformed shape line", reader.line());
    }
  }
  auto tensors = read_tensors(reader);
  model.scaler.mean = take(tensors, "scaler.mean", d, 1);
  model.scaler.scale = take(tensors, "scaler.scale", d, 1);
  ModelParams& p = model.params;
  for (long long g = 0; g < groups; ++g) {
    const std::string prefix = "embedding[" + std::to_string(g) + "].";
    EmbeddingParams e;
    e.weight = take(tensors, prefix + "weight", m, d);
    e.bias = take(tensors, prefix + "bias", m, 1);
    e.beta = model.hp.beta;
    p.embeddings.push_back(std::move(e));
  }
  for (long long k = 0; k < k_count; ++k) p.metric.u.push_back(take(tensors, "metric[" + std::to_string(k) + "]", m, m));
  p.log_sigma = take(tensors, "log_sigma", 1, 1)(0, 0);
  for (long long k = 0; k < k_count; ++k) {
    const std::string prefix = "prototypes[" + std::to_string(k) + "].";
    LabelPrototypes protos;
    protos.pos = take(tensors, prefix + "pos", -1, m);
    protos.neg = take(tensors, prefix + "neg", -1, m);
    model.prototypes.labels.push_back(std::move(protos));
  }
  if (!tensors.empty()) throw ParseError("unexpected tensor " + tensors.begin()->first, 0);
  return model;
}

TrainedModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open checkpoint " + path.string());
  return load_checkpoint(in);
}

void save_loss_history(const std::vector<EpochStats>& history, std::ostream& out) {
  const std::size_t k_count = history.empty() ? 0 : history.front().metric_norms.size();
  out << "epoch\titerations\tcross_entropy\tmetric\tcorrelation\ttotal";
  for (std::size_t k = 0; k < k_count; ++k) out << "\tnorm_u" << k;
  out << '\n' << std::setprecision(17);
  for (std::size_t e = 0; e < history.size(); ++e) {
    const EpochStats& s = history[e];
    out << e << '\t' << s.iterations << '\t' << s.cross_entropy << '\t' << s.metric << '\t'
        << s.correlation << '\t' << s.total;
    for (double n : s.metric_norms) out << '\t' << n;
    out << '\n';
  }
}

}  // namespace pnml
