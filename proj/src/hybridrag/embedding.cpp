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

#include "hybridrag/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "hybridrag/error.hpp"
#include "hybridrag/sparse_index.hpp"

namespace hybridrag {

namespace {

constexpr double kWordWeight = 1.0;
constexpr double kTrigramWeight = 0.5;

std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void add_feature(std::vector<double>& acc, std::string_view feature,
                 double weight) {
  const std::uint64_t h = fnv1a64(feature);
  const std::size_t bucket =
      static_cast<std::size_t>(splitmix_finalize(h) % acc.size());
  const bool negative =
      (splitmix_finalize(h ^ 0x9e3779b97f4a7c15ULL) >> 63) != 0;
  acc[bucket] += negative ? -weight : weight;
}

}  // namespace

double l2_norm(std::span<const double> v) {
  double sum = 0.0;
  for (const double x : v) sum += x * x;
  return std::sqrt(sum);
}

EmbeddingVector normalized(std::vector<double> raw) {
  const double norm = l2_norm(raw);
  if (norm == 0.0 || !std::isfinite(norm)) {
    std::fill(raw.begin(), raw.end(), 0.0);
    if (!raw.empty()) raw[0] = 1.0;
    return {std::move(raw)};
  }
  for (double& x : raw) x /= norm;
  return {std::move(raw)};
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dims() != b.dims()) {
    fail(ErrorCode::kDimensionMismatch,
         "cosine of vectors with dims " + std::to_string(a.dims()) + " and " +
             std::to_string(b.dims()));
  }
  return cosine(std::span<const double>(a.values),
                std::span<const double>(b.values));
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    fail(ErrorCode::kDimensionMismatch,
         "cosine of vectors with dims " + std::to_string(a.size()) + " and " +
             std::to_string(b.size()));
  }
  if (std::equal(a.begin(), a.end(), b.begin())) return 1.0;
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return std::clamp(dot, -1.0, 1.0);
}

std::vector<EmbeddingVector> Embedder::embed_batch(
    std::span<const std::string> texts) const {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed(t));
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

EmbeddingVector embed_reference(std::string_view text, std::size_t dims) {
  if (dims < 8) {
    fail(ErrorCode::kInvalidArgument, "reference embedder needs dims >= 8");
  }
  std::vector<double> acc(dims, 0.0);
  std::string feature;
  for (const auto& token : tokenize(text)) {
    feature.assign("w:").append(token);
    add_feature(acc, feature, kWordWeight);

    const std::string padded = " " + token + " ";
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
      feature.assign("c:").append(padded, i, 3);
      add_feature(acc, feature, kTrigramWeight);
    }
  }
  return normalized(std::move(acc));
}

ReferenceEmbedder::ReferenceEmbedder(std::size_t dims)
    : dims_(dims), id_("reference-fh1-" + std::to_string(dims)) {
  if (dims < 8) {
    fail(ErrorCode::kInvalidArgument, "reference embedder needs dims >= 8");
  }
}

EmbeddingVector ReferenceEmbedder::embed(std::string_view text) const {
  return embed_reference(text, dims_);
}

}  // namespace hybridrag
