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

#include <memory>
#include <string_view>
#include <vector>

#include "hybridrag/corpus.hpp"
#include "hybridrag/dense_index.hpp"
#include "hybridrag/embedding.hpp"
#include "hybridrag/fusion.hpp"
#include "hybridrag/sparse_index.hpp"

namespace hybridrag {

// Documents, chunks and both indexes over one corpus, plus the embedder that
// produced the dense vectors. Immutable after construction.
class SearchEngine {
 public:
  SearchEngine(std::vector<Document> docs, std::vector<Chunk> chunks,
               ChunkingConfig chunking, SparseIndex sparse, DenseIndex dense,
               std::shared_ptr<const Embedder> embedder);

  static SearchEngine build(std::vector<Document> docs,
                            const ChunkingConfig& chunking,
                            const BM25Params& bm25,
                            std::shared_ptr<const Embedder> embedder,
                            unsigned threads = 1);

  std::vector<ScoredDocument> search(std::string_view query, Strategy strategy,
                                     const FusionConfig& cfg,
                                     const HostBoostTable& hosts) const;

  // Best-matching body chunk of a document, or null when it has none.
  const Chunk* best_chunk(DocId doc_id, const EmbeddingVector& q) const;

  EmbeddingVector embed_query(std::string_view query) const {
    return embedder_->embed(query);
  }

  RetrievalView view() const { return {docs_, sparse_, dense_}; }
  const std::vector<Document>& docs() const { return docs_; }
  const std::vector<Chunk>& chunks() const { return chunks_; }
  const ChunkingConfig& chunking() const { return chunking_; }
  const SparseIndex& sparse() const { return sparse_; }
  const DenseIndex& dense() const { return dense_; }
  const Embedder& embedder() const { return *embedder_; }
  std::shared_ptr<const Embedder> embedder_ptr() const { return embedder_; }

 private:
  std::vector<Document> docs_;
  std::vector<Chunk> chunks_;
  ChunkingConfig chunking_;
  SparseIndex sparse_;
  DenseIndex dense_;
  std::shared_ptr<const Embedder> embedder_;
};

}  // namespace hybridrag
