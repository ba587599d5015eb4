// Copyright 2026 The HybridRAG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hybridrag/contrastive.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hybridrag/error.hpp"

namespace hybridrag {

namespace {

void check_finite(const Matrix& m, const char* what) {
  for (const double x : m.data) {
    if (!std::isfinite(x)) {
      fail(ErrorCode::kNumeric, std::string(what) + " contains a non-finite value");
    }
  }
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Projects each vector through W and normalizes. Keeps the pre-normalization
// norms for the backward pass.
struct Projected {
  Matrix unit;                // B x d_out
  std::vector<double> norms;  // |W v_i|
};

Projected project(const ProjectionModel& model,
                  std::span<const EmbeddingVector* const> inputs) {
  const auto& w = model.weights;
  Projected p{Matrix(inputs.size(), w.rows), std::vector<double>(inputs.size())};
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& v = inputs[i]->values;
    if (v.size() != w.cols) {
      fail(ErrorCode::kDimensionMismatch,
           "input has " + std::to_string(v.size()) + " dims, projection expects " +
               std::to_string(w.cols));
    }
    auto out = p.unit.row(i);
    for (std::size_t r = 0; r < w.rows; ++r) {
      double acc = 0.0;
      const auto wr = w.row(r);
      for (std::size_t c = 0; c < w.cols; ++c) acc += wr[c] * v[c];
      out[r] = acc;
    }
    const double n = l2_norm(out);
    p.norms[i] = n;
    if (n > 0.0) {
      for (double& x : out) x /= n;
    } else if (!out.empty()) {
      out[0] = 1.0;
    }
  }
  return p;
}

// Accumulates dL/dW given dL/dy for unit outputs y = z/|z|, z = W v.
void accumulate_weight_gradient(Matrix& grad, const Projected& p,
                                const Matrix& d_unit,
                                std::span<const EmbeddingVector* const> inputs) {
  std::vector<double> dz(grad.rows);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const double n = p.norms[i];
    if (n == 0.0) continue;
    const auto y = p.unit.row(i);
    const auto g = d_unit.row(i);
    double yg = 0.0;
    for (std::size_t r = 0; r < grad.rows; ++r) yg += y[r] * g[r];
    for (std::size_t r = 0; r < grad.rows; ++r) dz[r] = (g[r] - y[r] * yg) / n;
    const auto& v = inputs[i]->values;
    for (std::size_t r = 0; r < grad.rows; ++r) {
      auto gr = grad.row(r);
      for (std::size_t c = 0; c < grad.cols; ++c) gr[c] += dz[r] * v[c];
    }
  }
}

struct BatchViews {
  std::vector<const EmbeddingVector*> queries, titles, bodies;
};

BatchViews views_of(std::span<const TrainTriple> batch) {
  if (batch.empty()) fail(ErrorCode::kInvalidArgument, "empty training batch");
  BatchViews v;
  for (const auto& t : batch) {
    v.queries.push_back(&t.query);
    v.titles.push_back(&t.title);
    v.bodies.push_back(&t.body);
  }
  return v;
}

}  // namespace

double frobenius_norm(const Matrix& m) { return l2_norm(m.data); }

EmbeddingVector ProjectionModel::apply(const EmbeddingVector& v) const {
  const EmbeddingVector* in = &v;
  auto p = project(*this, std::span<const EmbeddingVector* const>(&in, 1));
  return {std::move(p.unit.data)};
}

void ProjectionModel::save(std::ostream& out) const {
  out << "hybridrag-projection " << kFormatVersion << '\n';
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", temperature);
  out << d_out() << ' ' << d_in() << ' ' << buf << '\n';
  for (std::size_t r = 0; r < weights.rows; ++r) {
    for (std::size_t c = 0; c < weights.cols; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", weights(r, c));
      if (c) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

ProjectionModel ProjectionModel::load(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "hybridrag-projection") {
    fail(ErrorCode::kParse, "not a projection model file");
  }
  if (version != kFormatVersion) {
    fail(ErrorCode::kParse,
         "projection model version " + std::to_string(version) + " is not supported");
  }
  std::size_t d_out = 0, d_in = 0;
  ProjectionModel m;
  if (!(in >> d_out >> d_in >> m.temperature) || d_out == 0 || d_in == 0 ||
      d_out > (1u << 16) || d_in > (1u << 16) || !(m.temperature > 0.0)) {
    fail(ErrorCode::kParse, "bad projection model header");
  }
  m.weights = Matrix(d_out, d_in);
  for (double& x : m.weights.data) {
    if (!(in >> x) || !std::isfinite(x)) {
      fail(ErrorCode::kParse, "projection model matrix is truncated or non-finite");
    }
  }
  return m;
}

void ProjectionModel::save_file(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  save(out);
  out.close();
  if (!out) fail(ErrorCode::kIo, "failed writing " + path.string());
}

ProjectionModel ProjectionModel::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot read projection model " + path.string());
  return load(in);
}

ProjectionModel initial_projection(std::size_t d_out, std::size_t d_in,
                                   std::uint64_t seed, double temperature) {
  if (d_out == 0 || d_in == 0) {
    fail(ErrorCode::kInvalidArgument, "projection dims must be positive");
  }
  std::mt19937_64 rng(seed);
  ProjectionModel m;
  m.temperature = temperature;
  m.weights = Matrix(d_out, d_in);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d_out));
  for (std::size_t i = 0; i < m.weights.data.size(); i += 2) {
    const double u1 = 1.0 - uniform01(rng);  // (0, 1]
    const double u2 = uniform01(rng);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    m.weights.data[i] = scale * radius * std::cos(angle);
    if (i + 1 < m.weights.data.size()) {
      m.weights.data[i + 1] = scale * radius * std::sin(angle);
    }
  }
  return m;
}

std::vector<TripleText> parse_triple_texts(std::istream& in) {
  std::vector<TripleText> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out.push_back({j.at("query").get<std::string>(), j.at("title").get<std::string>(),
                     j.at("body").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kParse,
           "triples line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<TripleText> load_triple_texts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open triples file " + path.string());
  return parse_triple_texts(in);
}

std::vector<TrainTriple> embed_triples(std::span<const TripleText> texts,
                                       const Embedder& embedder) {
  std::vector<TrainTriple> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    out.push_back({embedder.embed(t.query), embedder.embed(t.title),
                   embedder.embed(t.body)});
  }
  return out;
}

void TrainConfig::validate() const {
  if (batch_size < 2) fail(ErrorCode::kInvalidArgument, "batch_size must be >= 2");
  if (epochs < 1) fail(ErrorCode::kInvalidArgument, "epochs must be >= 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    fail(ErrorCode::kInvalidArgument, "learning_rate must be finite and >= 0");
  }
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    fail(ErrorCode::kInvalidArgument, "temperature must be > 0");
  }
}

InfoNceResult info_nce_with_gradient(const Matrix& anchors,
                                     const Matrix& positives, double temperature) {
  if (anchors.rows != positives.rows || anchors.cols != positives.cols) {
    fail(ErrorCode::kDimensionMismatch, "InfoNCE needs equally shaped batches");
  }
  if (anchors.rows == 0) fail(ErrorCode::kInvalidArgument, "InfoNCE needs B >= 1");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    fail(ErrorCode::kNumeric, "InfoNCE temperature must be finite and > 0");
  }
  check_finite(anchors, "InfoNCE anchors");
  check_finite(positives, "InfoNCE positives");

  const std::size_t b = anchors.rows;
  const std::size_t d = anchors.cols;
  Matrix s(b, b);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < d; ++k) dot += anchors(i, k) * positives(j, k);
      s(i, j) = dot / temperature;
    }
  }

  // Softmax over rows (anchor -> positives) and over columns.
  Matrix row_p(b, b), col_p(b, b);
  double row_ce = 0.0, col_ce = 0.0;
  for (std::size_t i = 0; i < b; ++i) {
    double m = s(i, 0);
    for (std::size_t j = 1; j < b; ++j) m = std::max(m, s(i, j));
    double z = 0.0;
    for (std::size_t j = 0; j < b; ++j) z += std::exp(s(i, j) - m);
    for (std::size_t j = 0; j < b; ++j) row_p(i, j) = std::exp(s(i, j) - m) / z;
    row_ce += (m + std::log(z)) - s(i, i);
  }
  for (std::size_t j = 0; j < b; ++j) {
    double m = s(0, j);
    for (std::size_t i = 1; i < b; ++i) m = std::max(m, s(i, j));
    double z = 0.0;
    for (std::size_t i = 0; i < b; ++i) z += std::exp(s(i, j) - m);
    for (std::size_t i = 0; i < b; ++i) col_p(i, j) = std::exp(s(i, j) - m) / z;
    col_ce += (m + std::log(z)) - s(j, j);
  }
  const double inv_b = 1.0 / static_cast<double>(b);

  InfoNceResult r;
  r.loss = 0.5 * (row_ce * inv_b + col_ce * inv_b);
  if (!std::isfinite(r.loss)) fail(ErrorCode::kNumeric, "InfoNCE loss is not finite");

  // dL/dS, then back through S = A P^T / t.
  Matrix ds(b, b);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      const double delta = i == j ? 1.0 : 0.0;
      ds(i, j) = 0.5 * inv_b * ((row_p(i, j) - delta) + (col_p(i, j) - delta));
    }
  }
  r.d_anchors = Matrix(b, d);
  r.d_positives = Matrix(b, d);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      const double g = ds(i, j) / temperature;
      for (std::size_t k = 0; k < d; ++k) {
        r.d_anchors(i, k) += g * positives(j, k);
        r.d_positives(j, k) += g * anchors(i, k);
      }
    }
  }
  return r;
}

double info_nce(const Matrix& anchors, const Matrix& positives, double temperature) {
  return info_nce_with_gradient(anchors, positives, temperature).loss;
}

LossTerms loss_terms(std::span<const TrainTriple> batch, const ProjectionModel& model) {
  const auto v = views_of(batch);
  const auto q = project(model, v.queries);
  const auto t = project(model, v.titles);
  const auto b = project(model, v.bodies);
  return {info_nce(q.unit, t.unit, model.temperature),
          info_nce(q.unit, b.unit, model.temperature)};
}

double total_loss(std::span<const TrainTriple> batch, const ProjectionModel& model) {
  return loss_terms(batch, model).total();
}

namespace {

struct LossAndGradient {
  double loss = 0.0;
  Matrix gradient;
};

LossAndGradient loss_and_gradient(std::span<const TrainTriple> batch,
                                  const ProjectionModel& model) {
  const auto v = views_of(batch);
  const auto q = project(model, v.queries);
  const auto t = project(model, v.titles);
  const auto b = project(model, v.bodies);
  auto with_titles = info_nce_with_gradient(q.unit, t.unit, model.temperature);
  auto with_bodies = info_nce_with_gradient(q.unit, b.unit, model.temperature);

  Matrix d_queries = with_titles.d_anchors;
  for (std::size_t i = 0; i < d_queries.data.size(); ++i) {
    d_queries.data[i] += with_bodies.d_anchors.data[i];
  }
  LossAndGradient out;
  out.loss = with_titles.loss + with_bodies.loss;
  out.gradient = Matrix(model.d_out(), model.d_in());
  accumulate_weight_gradient(out.gradient, q, d_queries, v.queries);
  accumulate_weight_gradient(out.gradient, t, with_titles.d_positives, v.titles);
  accumulate_weight_gradient(out.gradient, b, with_bodies.d_positives, v.bodies);
  return out;
}

}  // namespace

Matrix loss_gradient(std::span<const TrainTriple> batch, const ProjectionModel& model) {
  return loss_and_gradient(batch, model).gradient;
}

TrainResult train_projection(std::span<const TrainTriple> triples,
                             const TrainConfig& cfg, std::size_t d_out) {
  if (triples.empty()) fail(ErrorCode::kInvalidArgument, "no training triples");
  return train_projection(
      triples, cfg,
      initial_projection(d_out, triples.front().query.dims(), cfg.seed, cfg.temperature));
}

TrainResult train_projection(std::span<const TrainTriple> triples,
                             const TrainConfig& cfg, ProjectionModel init) {
  cfg.validate();
  if (triples.size() < cfg.batch_size) {
    fail(ErrorCode::kInvalidArgument,
         "need at least batch_size (" + std::to_string(cfg.batch_size) +
             ") triples, got " + std::to_string(triples.size()));
  }
  TrainResult result{std::move(init), {}};
  result.model.temperature = cfg.temperature;
  auto& w = result.model.weights;

  // The shuffle stream is separate from the initializer's stream.
  std::mt19937_64 rng(cfg.seed ^ 0x5deece66dULL);
  std::vector<std::size_t> order(triples.size());
  std::vector<TrainTriple> batch;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size() - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
      std::swap(order[i], order[j]);
    }

    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), begin + cfg.batch_size);
      if (end - begin < 2) break;
      batch.clear();
      for (std::size_t k = begin; k < end; ++k) batch.push_back(triples[order[k]]);

      LossAndGradient lg;
      try {
        lg = loss_and_gradient(batch, result.model);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNumeric) throw;
        fail(ErrorCode::kNumeric,
             "training diverged at epoch " + std::to_string(epoch + 1) + ": " + e.what());
      }
      loss_sum += lg.loss;
      ++batches;
      for (std::size_t k = 0; k < w.data.size(); ++k) {
        w.data[k] -= cfg.learning_rate * lg.gradient.data[k];
      }
    }
    const double mean = loss_sum / static_cast<double>(batches);
    bool finite = std::isfinite(mean);
    for (const double x : w.data) finite = finite && std::isfinite(x);
    if (!finite) {
      fail(ErrorCode::kNumeric,
           "training diverged at epoch " + std::to_string(epoch + 1));
    }
    result.epoch_loss.push_back(mean);
  }
  return result;
}

PairCosines pair_cosines(std::span<const TrainTriple> triples,
                         const ProjectionModel& model) {
  std::vector<EmbeddingVector> q, t;
  for (const auto& tr : triples) {
    q.push_back(model.apply(tr.query));
    t.push_back(model.apply(tr.title));
  }
  PairCosines pc;
  double neg_sum = 0.0;
  std::size_t neg_n = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (std::size_t j = 0; j < t.size(); ++j) {
      const double c = cosine(q[i], t[j]);
      if (i == j) {
        pc.positive += c;
      } else {
        neg_sum += c;
        ++neg_n;
      }
    }
  }
  if (!q.empty()) pc.positive /= static_cast<double>(q.size());
  pc.negative = neg_n ? neg_sum / static_cast<double>(neg_n) : 0.0;
  return pc;
}

ProjectionEmbedder::ProjectionEmbedder(ProjectionModel model)
    : model_(std::move(model)), base_(model_.d_in()) {
  std::ostringstream bytes;
  model_.save(bytes);
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016" PRIx64, fnv1a64(bytes.str()));
  id_ = "projection-" + std::string(hex) + "-" + std::to_string(model_.d_out()) +
        "-over-" + base_.identifier();
}

EmbeddingVector ProjectionEmbedder::embed(std::string_view text) const {
  return model_.apply(base_.embed(text));
}

}  // namespace hybridrag
