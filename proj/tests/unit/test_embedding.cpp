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

#include "hybridrag/embedding.hpp"
#include "hybridrag/error.hpp"
#include "support/generators.hpp"

namespace {

using namespace hybridrag;

TEST(Normalized, UnitNormOrBasisVector) {
  const auto v = normalized({3.0, 4.0});
  EXPECT_DOUBLE_EQ(v.values[0], 0.6);
  EXPECT_DOUBLE_EQ(v.values[1], 0.8);
  const auto z = normalized({0.0, 0.0, 0.0});
  EXPECT_EQ(z.values, (std::vector<double>{1.0, 0.0, 0.0}));
}

TEST(Cosine, Identities) {
  const auto v = normalized({1.0, 2.0, -3.0});
  EXPECT_EQ(cosine(v, v), 1.0);
  EXPECT_EQ(cosine(normalized({1, 0}), normalized({0, 1})), 0.0);
  EXPECT_DOUBLE_EQ(cosine(normalized({1, 2}), normalized({-1, -2})), -1.0);
  try {
    cosine(normalized({1, 0}), normalized({1, 0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(ReferenceEmbedder, UnitNormAndDeterministic) {
  testsupport::Rng rng(3);
  const auto vocab = testsupport::random_vocabulary(rng, 50);
  for (int i = 0; i < 50; ++i) {
    const auto text = testsupport::random_text(rng, vocab, 1 + static_cast<std::size_t>(i % 9));
    const auto a = embed_reference(text, 128);
    const auto b = embed_reference(text, 128);
    EXPECT_EQ(a, b);
    EXPECT_NEAR(l2_norm(a.values), 1.0, 1e-12);
    EXPECT_EQ(cosine(a, b), 1.0);
  }
  EXPECT_NEAR(l2_norm(embed_reference("", 64).values), 1.0, 1e-12);
  EXPECT_EQ(embed_reference("!!!", 16).values[0], 1.0);
}

TEST(ReferenceEmbedder, SharedTokensScoreHigher) {
  ReferenceEmbedder e(256);
  const auto base = e.embed("crop an image");
  EXPECT_GT(cosine(base, e.embed("crop a photo")),
            cosine(base, e.embed("export pdf settings")));
}

TEST(ReferenceEmbedder, CaseInsensitive) {
  EXPECT_EQ(embed_reference("Generative FILL", 64), embed_reference("generative fill", 64));
}

TEST(ReferenceEmbedder, IdentifierEncodesDims) {
  ReferenceEmbedder a(64), b(128);
  EXPECT_NE(a.identifier(), b.identifier());
  EXPECT_EQ(a.dims(), 64u);
  EXPECT_EQ(ReferenceEmbedder().dims(), ReferenceEmbedder::kDefaultDims);
}

TEST(Embedder, BatchMatchesSingle) {
  ReferenceEmbedder e(32);
  const std::vector<std::string> texts = {"one", "two words", ""};
  const auto batch = e.embed_batch(texts);
  ASSERT_EQ(batch.size(), 3u);
  for (std::size_t i = 0; i < texts.size(); ++i) EXPECT_EQ(batch[i], e.embed(texts[i]));
}

TEST(Fnv1a64, KnownValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

}  // namespace
