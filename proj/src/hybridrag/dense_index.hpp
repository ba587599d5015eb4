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

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hybridrag/corpus.hpp"
#include "hybridrag/embedding.hpp"

namespace hybridrag {

struct ChunkHit {
  ChunkId chunk_id = 0;
  double score = 0.0;
};

// Exhaustive cosine store. Vector ids 0..C-1 are the body chunks in chunk id
// order; ids C..C+N-1 are one synthetic title chunk per document (title
// chunk of doc d has id C + d).
class DenseIndex {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  DenseIndex() = default;

  static DenseIndex build(std::span<const Chunk> chunks,
                          std::span<const Document> docs, const Embedder& e,
                          unsigned threads = 1);

  const std::string& embedder_id() const { return embedder_id_; }
  std::size_t dims() const { return dims_; }
  std::size_t size() const { return chunk_to_doc_.size(); }
  std::size_t num_body_chunks() const { return num_body_chunks_; }
  std::size_t num_docs() const { return doc_vectors_.size(); }

  DocId doc_of(ChunkId id) const;
  bool is_title_chunk(ChunkId id) const {
    return id >= static_cast<ChunkId>(num_body_chunks_);
  }
  std::span<const double> vector(ChunkId id) const;
  std::span<const ChunkId> vectors_of(DocId doc_id) const;

  // Throws Error(kInvalidArgument) when the embedder differs from the one
  // the index was built with.
  void check_embedder(const Embedder& e) const;

  // Exact top-n, best first, ties by ascending chunk id.
  std::vector<ChunkHit> top_chunks(const EmbeddingVector& q, std::size_t n) const;

  // Max cosine over every vector of the document, title included.
  double max_chunk_cosine(DocId doc_id, const EmbeddingVector& q) const;

  void save(std::ostream& out) const;
  static DenseIndex load(std::istream& in);

  friend bool operator==(const DenseIndex&, const DenseIndex&) = default;

 private:
  double score(ChunkId id, const EmbeddingVector& q) const;
  void check_dims(const EmbeddingVector& q) const;
  void rebuild_doc_lists(std::size_t num_docs);

  std::string embedder_id_;
  std::size_t dims_ = 0;
  std::size_t num_body_chunks_ = 0;
  std::vector<double> values_;       // row-major, size() x dims_
  std::vector<DocId> chunk_to_doc_;  // per vector id
  std::vector<std::vector<ChunkId>> doc_vectors_;
};

double dense_max_chunk_cosine(const DenseIndex& index, DocId doc_id,
                              const EmbeddingVector& q);

std::vector<ChunkHit> dense_top_chunks(const DenseIndex& index,
                                       const EmbeddingVector& q, std::size_t n);

}  // namespace hybridrag
