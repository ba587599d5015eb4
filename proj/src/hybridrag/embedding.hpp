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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hybridrag {

// Unit-norm embedding. All producers in this library normalize their output;
// an input with no features maps to the first basis vector.
struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dims() const { return values.size(); }
  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

// Divides by the L2 norm, or returns e_0 for an all-zero input.
EmbeddingVector normalized(std::vector<double> raw);

double l2_norm(std::span<const double> v);

// Dot product of two unit vectors, clamped to [-1, 1]. Identical inputs
// score exactly 1. Throws Error(kDimensionMismatch) on a dims mismatch.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);
double cosine(std::span<const double> a, std::span<const double> b);

// Text-to-vector capability. Implementations must be deterministic and
// safe to call from several threads.
class Embedder {
 public:
  virtual ~Embedder() = default;

  virtual const std::string& identifier() const = 0;
  virtual std::size_t dims() const = 0;
  virtual EmbeddingVector embed(std::string_view text) const = 0;
  virtual std::vector<EmbeddingVector> embed_batch(
      std::span<const std::string> texts) const;
};

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

// Feature-hashing embedder. Features are the lowercase word tokens (weight
// 1.0, hashed as "w:" + token) and the character trigrams of each token
// padded with one space on either side (weight 0.5, hashed as "c:" + tri).
// For a feature f with h = fnv1a64(f), the bucket is mix(h) % dims and the
// sign is the top bit of mix(h ^ 0x9e3779b97f4a7c15), where mix is the
// splitmix64 finalizer. Counts accumulate in feature order, then the vector
// is L2-normalized.
EmbeddingVector embed_reference(std::string_view text, std::size_t dims);

class ReferenceEmbedder final : public Embedder {
 public:
  static constexpr std::size_t kDefaultDims = 512;

  explicit ReferenceEmbedder(std::size_t dims = kDefaultDims);

  const std::string& identifier() const override { return id_; }
  std::size_t dims() const override { return dims_; }
  EmbeddingVector embed(std::string_view text) const override;

 private:
  std::size_t dims_;
  std::string id_;
};

}  // namespace hybridrag
