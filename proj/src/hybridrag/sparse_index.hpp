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
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hybridrag/corpus.hpp"

namespace hybridrag {

// Lowercased maximal runs of word bytes (ASCII letters, digits, and any
// byte >= 0x80 so UTF-8 words stay whole). No stemming, no stopwords.
std::vector<std::string> tokenize(std::string_view text);

// Drops repeated terms, keeping first-occurrence order.
std::vector<std::string> distinct_terms(std::span<const std::string> terms);

struct BM25Params {
  double k1 = 1.2;
  double b = 0.75;

  void validate() const;
};

struct Posting {
  DocId doc_id = 0;
  std::uint32_t term_frequency = 0;
};

struct DocScore {
  DocId doc_id = 0;
  double score = 0.0;
};

// Inverted index over tokenize(title + " " + body). Immutable once built.
class SparseIndex {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  SparseIndex() = default;

  // Documents must carry dense ids 0..N-1 in order.
  static SparseIndex build(std::span<const Document> docs,
                           const BM25Params& params = {});

  std::size_t num_docs() const { return doc_lengths_.size(); }
  double avg_doc_length() const { return avg_doc_length_; }
  std::uint32_t doc_length(DocId doc_id) const;
  std::size_t num_terms() const { return postings_.size(); }
  const BM25Params& params() const { return params_; }

  // Postings sorted by doc_id; empty span for unknown terms.
  std::span<const Posting> postings(std::string_view term) const;
  std::size_t document_frequency(std::string_view term) const;
  double idf(std::string_view term) const;

  // BM25 of one document over the distinct query terms. Throws
  // Error(kNotFound) for unknown doc ids.
  double score(std::span<const std::string> query_terms, DocId doc_id,
               const BM25Params& params) const;
  double score(std::span<const std::string> query_terms, DocId doc_id) const {
    return score(query_terms, doc_id, params_);
  }

  // Top-n documents containing at least one query term, best first, ties by
  // ascending doc_id.
  std::vector<DocScore> top_docs(std::string_view query, std::size_t n) const;

  // Every document with a non-zero term overlap, ascending doc_id.
  std::vector<DocId> matching_docs(std::span<const std::string> terms) const;

  void save(std::ostream& out) const;
  static SparseIndex load(std::istream& in);

  friend bool operator==(const SparseIndex&, const SparseIndex&);

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  using PostingMap = std::unordered_map<std::string, std::vector<Posting>,
                                        StringHash, std::equal_to<>>;

  PostingMap postings_;
  std::vector<std::uint32_t> doc_lengths_;
  double avg_doc_length_ = 0.0;
  BM25Params params_;
};

double bm25_score(const SparseIndex& index,
                  std::span<const std::string> query_terms, DocId doc_id,
                  const BM25Params& params);

std::vector<DocScore> bm25_top_docs(const SparseIndex& index,
                                    std::string_view query, std::size_t n);

}  // namespace hybridrag
