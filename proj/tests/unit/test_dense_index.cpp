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

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "hybridrag/dense_index.hpp"
#include "hybridrag/error.hpp"
#include "oracles/oracles.hpp"
#include "support/docs.hpp"
#include "support/generators.hpp"
#include "support/planted_embedder.hpp"

namespace {

using namespace hybridrag;
using testsupport::make_doc;

Chunk chunk(ChunkId id, DocId doc, std::string text) {
  Chunk c;
  c.chunk_id = id;
  c.doc_id = doc;
  c.text = std::move(text);
  c.char_end = c.text.size();
  return c;
}

TEST(DenseIndex, CountsBodyAndTitleVectors) {
  ReferenceEmbedder e(32);
  std::vector<Document> docs = {make_doc(0, "b", "Title")};
  std::vector<Chunk> chunks = {chunk(0, 0, "one"), chunk(1, 0, "two"), chunk(2, 0, "three")};
  const auto index = DenseIndex::build(chunks, docs, e);
  EXPECT_EQ(index.size(), 4u);
  EXPECT_EQ(index.num_body_chunks(), 3u);
  EXPECT_TRUE(index.is_title_chunk(3));
  EXPECT_EQ(index.doc_of(3), 0);
  EXPECT_EQ(index.vectors_of(0).size(), 4u);

  const auto empty = DenseIndex::build({}, docs, e);
  EXPECT_EQ(empty.size(), 1u);
  EXPECT_TRUE(empty.is_title_chunk(0));
}

TEST(DenseIndex, RebuildIsIdentical) {
  ReferenceEmbedder e(32);
  std::vector<Document> docs = {make_doc(0, "x", "t0"), make_doc(1, "y", "t1")};
  std::vector<Chunk> chunks = {chunk(0, 0, "alpha"), chunk(1, 1, "beta")};
  EXPECT_TRUE(DenseIndex::build(chunks, docs, e) == DenseIndex::build(chunks, docs, e, 4));
}

TEST(DenseIndex, TopChunksMatchesBruteForce) {
  testsupport::Rng rng(11);
  ReferenceEmbedder e(48);
  const auto vocab = testsupport::random_vocabulary(rng, 40);
  std::vector<Document> docs;
  std::vector<Chunk> chunks;
  for (DocId d = 0; d < 6; ++d) {
    docs.push_back(make_doc(d, "x", testsupport::random_text(rng, vocab, 2)));
    for (int k = 0; k < 5; ++k) {
      chunks.push_back(chunk(static_cast<ChunkId>(chunks.size()), d,
                             testsupport::random_text(rng, vocab, 6)));
    }
  }
  const auto index = DenseIndex::build(chunks, docs, e);
  ASSERT_EQ(index.num_body_chunks(), 30u);
  for (int q = 0; q < 10; ++q) {
    const auto query = e.embed(testsupport::random_text(rng, vocab, 3));
    std::vector<std::pair<double, ChunkId>> all;
    for (std::size_t i = 0; i < chunks.size(); ++i) {
      all.push_back({oracle::dot(e.embed(chunks[i].text).values, query.values),
                     static_cast<ChunkId>(i)});
    }
    for (std::size_t d = 0; d < docs.size(); ++d) {
      all.push_back({oracle::dot(e.embed(docs[d].title).values, query.values),
                     static_cast<ChunkId>(chunks.size() + d)});
    }
    std::stable_sort(all.begin(), all.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    const auto hits = index.top_chunks(query, 1000);
    ASSERT_EQ(hits.size(), all.size());
    for (std::size_t i = 0; i < hits.size(); ++i) {
      EXPECT_EQ(hits[i].chunk_id, all[i].second);
      EXPECT_NEAR(hits[i].score, all[i].first, 1e-12);
    }
    for (std::size_t d = 0; d < docs.size(); ++d) {
      double best = -2.0;
      for (const auto& [s, id] : all) {
        if (index.doc_of(id) == static_cast<DocId>(d)) best = std::max(best, s);
      }
      EXPECT_NEAR(index.max_chunk_cosine(static_cast<DocId>(d), query), best, 1e-12);
    }
    EXPECT_EQ(index.top_chunks(query, 4).size(), 4u);
  }
}

TEST(DenseIndex, QueryEqualToChunkRanksFirst) {
  ReferenceEmbedder e(64);
  std::vector<Document> docs = {make_doc(0, "x", "unrelated heading")};
  std::vector<Chunk> chunks = {chunk(0, 0, "brush settings"), chunk(1, 0, "crop the canvas")};
  const auto index = DenseIndex::build(chunks, docs, e);
  const auto hits = index.top_chunks(e.embed("crop the canvas"), 1);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].chunk_id, 1);
  EXPECT_EQ(hits[0].score, 1.0);
}

TEST(DenseIndex, MaxChunkCosineTakesMaximum) {
  testsupport::PlantedEmbedder e(8);
  e.plant("a", testsupport::planted_vector(8, 0, 0.2, 1));
  e.plant("b", testsupport::planted_vector(8, 0, 0.9, 2));
  e.plant("c", testsupport::planted_vector(8, 0, 0.4, 3));
  e.plant("title", testsupport::planted_vector(8, 0, 0.0, 4));
  e.plant("single", testsupport::planted_vector(8, 0, 0.3, 5));
  std::vector<double> q(8, 0.0);
  q[0] = 1.0;
  e.plant("q", q);
  std::vector<Document> docs = {make_doc(0, "x", "title"), make_doc(1, "y", "title")};
  std::vector<Chunk> chunks = {chunk(0, 0, "a"), chunk(1, 0, "b"), chunk(2, 0, "c"),
                               chunk(3, 1, "single")};
  const auto index = DenseIndex::build(chunks, docs, e);
  EXPECT_NEAR(index.max_chunk_cosine(0, e.embed("q")), 0.9, 1e-12);
  EXPECT_NEAR(index.max_chunk_cosine(1, e.embed("q")), 0.3, 1e-12);
}

TEST(DenseIndex, EmbedderAndDimsChecks) {
  ReferenceEmbedder e(16), other(32);
  std::vector<Document> docs = {make_doc(0, "x", "t")};
  const auto index = DenseIndex::build({}, docs, e);
  EXPECT_NO_THROW(index.check_embedder(e));
  EXPECT_THROW(index.check_embedder(other), Error);
  try {
    index.top_chunks(other.embed("q"), 1);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(DenseIndex, SaveLoadRoundTripIsBitExact) {
  ReferenceEmbedder e(24);
  std::vector<Document> docs = {make_doc(0, "x", "first"), make_doc(1, "y", "second")};
  std::vector<Chunk> chunks = {chunk(0, 0, "alpha beta"), chunk(1, 1, "gamma")};
  const auto index = DenseIndex::build(chunks, docs, e);
  std::stringstream buf;
  index.save(buf);
  const auto loaded = DenseIndex::load(buf);
  EXPECT_TRUE(loaded == index);
  std::stringstream truncated(buf.str().substr(0, 20));
  EXPECT_THROW(DenseIndex::load(truncated), Error);
}

}  // namespace
