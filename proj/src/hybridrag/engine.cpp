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

#include "hybridrag/engine.hpp"

#include "hybridrag/error.hpp"

namespace hybridrag {

SearchEngine::SearchEngine(std::vector<Document> docs, std::vector<Chunk> chunks,
                           ChunkingConfig chunking, SparseIndex sparse,
                           DenseIndex dense,
                           std::shared_ptr<const Embedder> embedder)
    : docs_(std::move(docs)),
      chunks_(std::move(chunks)),
      chunking_(std::move(chunking)),
      sparse_(std::move(sparse)),
      dense_(std::move(dense)),
      embedder_(std::move(embedder)) {
  if (!embedder_) fail(ErrorCode::kInvalidArgument, "engine needs an embedder");
  dense_.check_embedder(*embedder_);
  if (sparse_.num_docs() != docs_.size() || dense_.num_docs() != docs_.size() ||
      dense_.num_body_chunks() != chunks_.size()) {
    fail(ErrorCode::kInvalidArgument,
         "sparse index, dense index and corpus disagree on their sizes");
  }
}

SearchEngine SearchEngine::build(std::vector<Document> docs,
                                 const ChunkingConfig& chunking,
                                 const BM25Params& bm25,
                                 std::shared_ptr<const Embedder> embedder,
                                 unsigned threads) {
  if (!embedder) fail(ErrorCode::kInvalidArgument, "engine needs an embedder");
  auto chunks = chunk_corpus(docs, chunking);
  auto sparse = SparseIndex::build(docs, bm25);
  auto dense = DenseIndex::build(chunks, docs, *embedder, threads);
  return SearchEngine(std::move(docs), std::move(chunks), chunking,
                      std::move(sparse), std::move(dense), std::move(embedder));
}

std::vector<ScoredDocument> SearchEngine::search(std::string_view query,
                                                 Strategy strategy,
                                                 const FusionConfig& cfg,
                                                 const HostBoostTable& hosts) const {
  if (!uses_dense(strategy)) {
    return hybridrag::search(view(), query, nullptr, strategy, cfg, hosts);
  }
  const auto q = embed_query(query);
  return hybridrag::search(view(), query, &q, strategy, cfg, hosts);
}

const Chunk* SearchEngine::best_chunk(DocId doc_id,
                                      const EmbeddingVector& q) const {
  const Chunk* best = nullptr;
  double best_score = -2.0;
  for (const ChunkId id : dense_.vectors_of(doc_id)) {
    if (dense_.is_title_chunk(id)) continue;
    const double s = cosine(dense_.vector(id), std::span<const double>(q.values));
    if (s > best_score) {
      best_score = s;
      best = &chunks_[static_cast<std::size_t>(id)];
    }
  }
  return best;
}

}  // namespace hybridrag
