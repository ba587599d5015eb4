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

// Contrastive fine-tuning of a linear projection over frozen embeddings.
//
// The encoder is f(v) = normalize(W v). For a batch of (query, title, body)
// triples the objective is
//
//   L = InfoNCE(f(queries), f(titles)) + InfoNCE(f(queries), f(bodies))
//
// with the symmetric two-direction InfoNCE: S = A P^T / temperature and
// InfoNCE = (mean_i CE(S[i,:], i) + mean_j CE(S[:,j], j)) / 2. In-batch
// mismatches act as negatives.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hybridrag/embedding.hpp"

namespace hybridrag {

// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

double frobenius_norm(const Matrix& m);

struct ProjectionModel {
  static constexpr int kFormatVersion = 1;

  Matrix weights;  // d_out x d_in
  double temperature = 0.07;

  std::size_t d_in() const { return weights.cols; }
  std::size_t d_out() const { return weights.rows; }

  // normalize(W v); throws Error(kDimensionMismatch) if v.dims() != d_in.
  EmbeddingVector apply(const EmbeddingVector& v) const;

  // "hybridrag-projection 1" / "d_out d_in temperature" / one row per line.
  void save(std::ostream& out) const;
  static ProjectionModel load(std::istream& in);
  void save_file(const std::filesystem::path& path) const;
  static ProjectionModel load_file(const std::filesystem::path& path);

  friend bool operator==(const ProjectionModel&, const ProjectionModel&) = default;
};

// Gaussian entries with standard deviation 1/sqrt(d_out), drawn from a
// seeded mt19937_64 through Box-Muller.
ProjectionModel initial_projection(std::size_t d_out, std::size_t d_in,
                                   std::uint64_t seed, double temperature);

struct TrainTriple {
  EmbeddingVector query;
  EmbeddingVector title;
  EmbeddingVector body;
};

struct TripleText {
  std::string query;
  std::string title;
  std::string body;
};

// Line-delimited JSON with string fields "query", "title", "body".
std::vector<TripleText> load_triple_texts(const std::filesystem::path& path);
std::vector<TripleText> parse_triple_texts(std::istream& in);
std::vector<TrainTriple> embed_triples(std::span<const TripleText> texts,
                                       const Embedder& embedder);

struct TrainConfig {
  std::size_t batch_size = 8;
  std::size_t epochs = 50;
  double learning_rate = 0.5;
  double temperature = 0.07;
  std::uint64_t seed = 17;

  void validate() const;
};

struct InfoNceResult {
  double loss = 0.0;
  Matrix d_anchors;    // dL / d anchors
  Matrix d_positives;  // dL / d positives
};

// Rows are expected unit-norm. Throws Error(kNumeric) on non-finite input.
double info_nce(const Matrix& anchors, const Matrix& positives, double temperature);
InfoNceResult info_nce_with_gradient(const Matrix& anchors,
                                     const Matrix& positives, double temperature);

struct LossTerms {
  double titles = 0.0;
  double bodies = 0.0;
  double total() const { return titles + bodies; }
};

LossTerms loss_terms(std::span<const TrainTriple> batch, const ProjectionModel& model);
double total_loss(std::span<const TrainTriple> batch, const ProjectionModel& model);

// dL_total / dW, including the Jacobian of the per-vector normalization.
Matrix loss_gradient(std::span<const TrainTriple> batch, const ProjectionModel& model);

struct TrainResult {
  ProjectionModel model;
  std::vector<double> epoch_loss;  // mean batch loss per epoch
};

// Fixed-step gradient descent over seeded shuffles. A trailing batch with
// fewer than two triples is skipped. Throws Error(kNumeric) naming the epoch
// if the loss stops being finite.
TrainResult train_projection(std::span<const TrainTriple> triples,
                             const TrainConfig& cfg, std::size_t d_out);
TrainResult train_projection(std::span<const TrainTriple> triples,
                             const TrainConfig& cfg, ProjectionModel init);

struct PairCosines {
  double positive = 0.0;  // mean cos(f(query_i), f(title_i))
  double negative = 0.0;  // mean cos(f(query_i), f(title_j)), j != i
};

PairCosines pair_cosines(std::span<const TrainTriple> triples,
                         const ProjectionModel& model);

// Reference embedder followed by a trained projection.
class ProjectionEmbedder final : public Embedder {
 public:
  explicit ProjectionEmbedder(ProjectionModel model);

  const std::string& identifier() const override { return id_; }
  std::size_t dims() const override { return model_.d_out(); }
  EmbeddingVector embed(std::string_view text) const override;

 private:
  ProjectionModel model_;
  ReferenceEmbedder base_;
  std::string id_;
};

}  // namespace hybridrag
