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

#include "hybridrag/dense_index.hpp"

#include <algorithm>
#include <cmath>

#include "hybridrag/binary_io.hpp"
#include "hybridrag/error.hpp"
#include "hybridrag/parallel.hpp"

namespace hybridrag {

namespace {

constexpr std::string_view kMagic = "HRDENSE1";
constexpr std::size_t kEmbedBatch = 64;

}  // namespace

DenseIndex DenseIndex::build(std::span<const Chunk> chunks,
                             std::span<const Document> docs, const Embedder& e,
                             unsigned threads) {
  check_dense_doc_ids(docs);
  DenseIndex index;
  index.embedder_id_ = e.identifier();
  index.dims_ = e.dims();
  index.num_body_chunks_ = chunks.size();

  std::vector<std::string> texts;
  texts.reserve(chunks.size() + docs.size());
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    const auto& c = chunks[i];
    if (c.chunk_id != static_cast<ChunkId>(i)) {
      fail(ErrorCode::kInvalidArgument,
           "chunk ids must be dense and ordered; position " +
               std::to_string(i) + " holds chunk_id " +
               std::to_string(c.chunk_id));
    }
    if (c.doc_id < 0 || static_cast<std::size_t>(c.doc_id) >= docs.size()) {
      fail(ErrorCode::kInvalidArgument,
           "chunk " + std::to_string(c.chunk_id) + " refers to unknown doc " +
               std::to_string(c.doc_id));
    }
    texts.push_back(c.text);
    index.chunk_to_doc_.push_back(c.doc_id);
  }
  for (const auto& d : docs) {
    texts.push_back(d.title);
    index.chunk_to_doc_.push_back(d.doc_id);
  }

  const std::size_t total = texts.size();
  index.values_.assign(total * index.dims_, 0.0);
  const std::size_t batches = (total + kEmbedBatch - 1) / kEmbedBatch;
  parallel_for(batches, threads, [&](std::size_t b) {
    const std::size_t begin = b * kEmbedBatch;
    const std::size_t end = std::min(total, begin + kEmbedBatch);
    const auto vecs = e.embed_batch(
        std::span<const std::string>(texts).subspan(begin, end - begin));
    if (vecs.size() != end - begin) {
      fail(ErrorCode::kTransport, "embedder returned a short batch");
    }
    for (std::size_t i = begin; i < end; ++i) {
      const auto& v = vecs[i - begin];
      if (v.dims() != index.dims_) {
        fail(ErrorCode::kDimensionMismatch,
             "embedder produced " + std::to_string(v.dims()) +
                 " dims, expected " + std::to_string(index.dims_));
      }
      std::copy(v.values.begin(), v.values.end(),
                index.values_.begin() + static_cast<std::ptrdiff_t>(i * index.dims_));
    }
  });

  index.rebuild_doc_lists(docs.size());
  return index;
}

void DenseIndex::rebuild_doc_lists(std::size_t num_docs) {
  doc_vectors_.assign(num_docs, {});
  for (std::size_t i = 0; i < chunk_to_doc_.size(); ++i) {
    doc_vectors_[static_cast<std::size_t>(chunk_to_doc_[i])].push_back(
        static_cast<ChunkId>(i));
  }
}

DocId DenseIndex::doc_of(ChunkId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= size()) {
    fail(ErrorCode::kNotFound, "unknown chunk id " + std::to_string(id));
  }
  return chunk_to_doc_[static_cast<std::size_t>(id)];
}

std::span<const double> DenseIndex::vector(ChunkId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= size()) {
    fail(ErrorCode::kNotFound, "unknown chunk id " + std::to_string(id));
  }
  return std::span<const double>(values_).subspan(
      static_cast<std::size_t>(id) * dims_, dims_);
}

std::span<const ChunkId> DenseIndex::vectors_of(DocId doc_id) const {
  if (doc_id < 0 || static_cast<std::size_t>(doc_id) >= doc_vectors_.size()) {
    fail(ErrorCode::kNotFound,
         "unknown doc_id " + std::to_string(doc_id) + " in dense index");
  }
  return doc_vectors_[static_cast<std::size_t>(doc_id)];
}

void DenseIndex::check_embedder(const Embedder& e) const {
  if (e.identifier() != embedder_id_) {
    fail(ErrorCode::kInvalidArgument,
         "embedder mismatch: index was built with '" + embedder_id_ +
             "' but the query embedder is '" + e.identifier() + "'");
  }
}

void DenseIndex::check_dims(const EmbeddingVector& q) const {
  if (q.dims() != dims_) {
    fail(ErrorCode::kDimensionMismatch,
         "query vector has " + std::to_string(q.dims()) +
             " dims, index has " + std::to_string(dims_));
  }
}

double DenseIndex::score(ChunkId id, const EmbeddingVector& q) const {
  return cosine(std::span<const double>(values_).subspan(
                    static_cast<std::size_t>(id) * dims_, dims_),
                std::span<const double>(q.values));
}

std::vector<ChunkHit> DenseIndex::top_chunks(const EmbeddingVector& q,
                                             std::size_t n) const {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "top-n must be >= 1");
  check_dims(q);
  std::vector<ChunkHit> hits(size());
  for (std::size_t i = 0; i < size(); ++i) {
    hits[i] = {static_cast<ChunkId>(i), score(static_cast<ChunkId>(i), q)};
  }
  auto better = [](const ChunkHit& a, const ChunkHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.chunk_id < b.chunk_id;
  };
  if (hits.size() > n) {
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(n),
                      hits.end(), better);
    hits.resize(n);
  } else {
    std::sort(hits.begin(), hits.end(), better);
  }
  return hits;
}

double DenseIndex::max_chunk_cosine(DocId doc_id,
                                    const EmbeddingVector& q) const {
  check_dims(q);
  const auto ids = vectors_of(doc_id);
  if (ids.empty()) {
    fail(ErrorCode::kNotFound,
         "doc " + std::to_string(doc_id) + " has no vectors");
  }
  double best = -1.0;
  for (const ChunkId id : ids) best = std::max(best, score(id, q));
  return best;
}

void DenseIndex::save(std::ostream& out) const {
  using namespace binary;
  put_magic(out, kMagic);
  put_u32(out, kFormatVersion);
  put_string(out, embedder_id_);
  put_u64(out, dims_);
  put_u64(out, size());
  put_u64(out, num_body_chunks_);
  put_u64(out, doc_vectors_.size());
  for (std::size_t i = 0; i < size(); ++i) {
    put_i64(out, chunk_to_doc_[i]);
    for (std::size_t d = 0; d < dims_; ++d) put_f64(out, values_[i * dims_ + d]);
  }
  if (!out) fail(ErrorCode::kIo, "failed writing dense index");
}

DenseIndex DenseIndex::load(std::istream& in) {
  binary::Reader r(in, "dense index");
  r.expect_magic(kMagic);
  const auto version = r.u32();
  if (version != kFormatVersion) {
    fail(ErrorCode::kParse, "dense index format version " +
                                std::to_string(version) + " is not supported");
  }
  DenseIndex index;
  index.embedder_id_ = r.string(4096);
  index.dims_ = r.count(1 << 20);
  const auto count = r.count(1ULL << 32);
  index.num_body_chunks_ = r.count(count);
  const auto num_docs = r.count(count);
  index.chunk_to_doc_.resize(count);
  index.values_.resize(count * index.dims_);
  for (std::size_t i = 0; i < count; ++i) {
    const auto doc = r.i64();
    if (doc < 0 || static_cast<std::uint64_t>(doc) >= num_docs) {
      fail(ErrorCode::kParse, "dense index: corrupt chunk-to-doc entry");
    }
    index.chunk_to_doc_[i] = doc;
    for (std::size_t d = 0; d < index.dims_; ++d) {
      index.values_[i * index.dims_ + d] = r.f64();
    }
  }
  index.rebuild_doc_lists(num_docs);
  return index;
}

double dense_max_chunk_cosine(const DenseIndex& index, DocId doc_id,
                              const EmbeddingVector& q) {
  return index.max_chunk_cosine(doc_id, q);
}

std::vector<ChunkHit> dense_top_chunks(const DenseIndex& index,
                                       const EmbeddingVector& q,
                                       std::size_t n) {
  return index.top_chunks(q, n);
}

}  // namespace hybridrag
