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

#include <cmath>
#include <sstream>

#include "hybridrag/error.hpp"
#include "hybridrag/sparse_index.hpp"
#include "oracles/oracles.hpp"
#include "support/docs.hpp"
#include "support/generators.hpp"

namespace {

using namespace hybridrag;
using testsupport::make_docs;

std::vector<std::string> terms(std::initializer_list<const char*> t) {
  return {t.begin(), t.end()};
}

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("Generative Fill!"), terms({"generative", "fill"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(tokenize("BM25-boost v2"), terms({"bm25", "boost", "v2"}));
  EXPECT_EQ(tokenize("Café au lait"), terms({"café", "au", "lait"}));
  EXPECT_EQ(distinct_terms(terms({"a", "b", "a", "c", "b"})), terms({"a", "b", "c"}));
}

TEST(SparseIndex, CountsOnTwoDocs) {
  const auto docs = make_docs({"cat sat", "dog ran fast"});
  const auto index = SparseIndex::build(docs);
  EXPECT_EQ(index.num_docs(), 2u);
  EXPECT_DOUBLE_EQ(index.avg_doc_length(), 2.5);
  const auto cat = index.postings("cat");
  ASSERT_EQ(cat.size(), 1u);
  EXPECT_EQ(cat[0].doc_id, 0);
  EXPECT_EQ(cat[0].term_frequency, 1u);
  EXPECT_TRUE(index.postings("bird").empty());
  EXPECT_EQ(index.document_frequency("dog"), 1u);
  EXPECT_EQ(index.doc_length(1), 3u);
}

TEST(SparseIndex, EmptyCorpus) {
  const auto index = SparseIndex::build({});
  EXPECT_EQ(index.num_docs(), 0u);
  EXPECT_TRUE(index.top_docs("anything", 5).empty());
}

TEST(Bm25, WorkedExample) {
  const auto docs = make_docs({"cat sat", "dog ran fast"});
  const auto index = SparseIndex::build(docs);
  const auto q = terms({"cat"});
  const double expected = std::log(2.0) * 2.2 / 2.02;
  EXPECT_NEAR(index.score(q, 0), 0.7549, 1e-4);
  EXPECT_NEAR(index.score(q, 0), expected, 1e-12);
  EXPECT_EQ(index.score(q, 1), 0.0);
  EXPECT_EQ(index.score(terms({"bird"}), 0), 0.0);
  EXPECT_EQ(index.score(terms({"cat", "cat"}), 0), index.score(q, 0));
}

TEST(Bm25, UnknownDocIsNotFound) {
  const auto index = SparseIndex::build(make_docs({"a"}));
  try {
    index.score(terms({"a"}), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

TEST(Bm25, MatchesOracleOnRandomCorpora) {
  testsupport::Rng rng(7);
  for (int iter = 0; iter < 30; ++iter) {
    const auto vocab = testsupport::random_vocabulary(rng, 30);
    const auto docs = testsupport::random_corpus(rng, static_cast<std::size_t>(rng.range(1, 25)), vocab);
    BM25Params p;
    p.k1 = rng.uniform(0.5, 2.0);
    p.b = rng.uniform(0.0, 1.0);
    const auto index = SparseIndex::build(docs, p);
    std::vector<std::string> texts;
    for (const auto& d : docs) texts.push_back(d.title + " " + d.body);
    const std::string query = testsupport::random_text(rng, vocab, 3);
    const auto qt = tokenize(query);
    for (std::size_t d = 0; d < docs.size(); ++d) {
      EXPECT_NEAR(index.score(qt, static_cast<DocId>(d)), oracle::bm25(texts, d, query, p.k1, p.b),
                  1e-9);
    }
  }
}

TEST(TopDocs, Behaviour) {
  const auto docs = make_docs({"alpha beta", "beta gamma", "rare rare rare beta", "gamma",
                               "rare beta gamma alpha delta epsilon"});
  const auto index = SparseIndex::build(docs);
  EXPECT_TRUE(index.top_docs("zeta", 5).empty());
  const auto all = index.top_docs("beta", 100);
  EXPECT_EQ(all.size(), 4u);
  const auto rare = index.top_docs("rare", 5);
  ASSERT_EQ(rare.size(), 2u);
  EXPECT_EQ(rare[0].doc_id, 2);
  for (std::size_t i = 1; i < all.size(); ++i) {
    EXPECT_TRUE(all[i - 1].score > all[i].score ||
                (all[i - 1].score == all[i].score && all[i - 1].doc_id < all[i].doc_id));
  }
  EXPECT_EQ(index.top_docs("beta", 2).size(), 2u);
}

TEST(TopDocs, RareTermPlantedDocFirst) {
  std::vector<std::string> bodies(8, "common words here");
  bodies[3] = "zyx zyx zyx common";
  bodies[5] = "zyx common words";
  const auto index = SparseIndex::build(make_docs(bodies));
  const auto hits = index.top_docs("zyx", 3);
  ASSERT_FALSE(hits.empty());
  EXPECT_EQ(hits[0].doc_id, 3);
}

TEST(SparseIndex, MatchingDocsAndDeterminism) {
  const auto docs = make_docs({"a b", "c", "b d", "e"});
  const auto i1 = SparseIndex::build(docs);
  const auto i2 = SparseIndex::build(docs);
  EXPECT_TRUE(i1 == i2);
  EXPECT_EQ(i1.matching_docs(terms({"b", "e"})), (std::vector<DocId>{0, 2, 3}));
}

TEST(SparseIndex, SaveLoadRoundTrip) {
  testsupport::Rng rng(99);
  const auto docs = testsupport::random_corpus(rng, 20, testsupport::random_vocabulary(rng, 40));
  const auto index = SparseIndex::build(docs);
  std::stringstream buf;
  index.save(buf);
  const auto loaded = SparseIndex::load(buf);
  EXPECT_TRUE(loaded == index);
}

TEST(SparseIndex, LoadRejectsGarbage) {
  std::stringstream buf("not an index at all");
  EXPECT_THROW(SparseIndex::load(buf), Error);
}

TEST(Bm25Params, Validation) {
  BM25Params p;
  p.k1 = -1;
  EXPECT_THROW(p.validate(), Error);
  p.k1 = 1.2;
  p.b = 1.5;
  EXPECT_THROW(p.validate(), Error);
}

}  // namespace
