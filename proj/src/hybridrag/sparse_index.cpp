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

#include "hybridrag/sparse_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "hybridrag/binary_io.hpp"
#include "hybridrag/error.hpp"

namespace hybridrag {

namespace {

constexpr std::string_view kMagic = "HRSPARSE";

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c >= 0x80;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size()) break;
    std::string token;
    while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) {
      char c = text[i++];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      token.push_back(c);
    }
    tokens.push_back(std::move(token));
  }
  return tokens;
}

std::vector<std::string> distinct_terms(std::span<const std::string> terms) {
  std::vector<std::string> out;
  std::unordered_set<std::string_view> seen;
  for (const auto& t : terms) {
    if (seen.insert(t).second) out.push_back(t);
  }
  return out;
}

void BM25Params::validate() const {
  if (!(k1 >= 0.0) || !std::isfinite(k1)) {
    fail(ErrorCode::kInvalidArgument, "bm25 k1 must be a finite value >= 0");
  }
  if (!(b >= 0.0 && b <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "bm25 b must lie in [0, 1]");
  }
}

SparseIndex SparseIndex::build(std::span<const Document> docs,
                               const BM25Params& params) {
  params.validate();
  check_dense_doc_ids(docs);

  SparseIndex index;
  index.params_ = params;
  index.doc_lengths_.reserve(docs.size());
  std::uint64_t total_length = 0;

  for (const auto& doc : docs) {
    std::string field;
    field.reserve(doc.title.size() + 1 + doc.body.size());
    field.append(doc.title).append(" ").append(doc.body);
    const auto tokens = tokenize(field);

    std::unordered_map<std::string_view, std::uint32_t> tf;
    std::vector<std::string_view> order;
    for (const auto& t : tokens) {
      if (tf[t]++ == 0) order.push_back(t);
    }
    // Doc ids arrive ascending, so appending keeps every list sorted.
    for (const auto term : order) {
      index.postings_[std::string(term)].push_back({doc.doc_id, tf[term]});
    }
    index.doc_lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));
    total_length += tokens.size();
  }
  index.avg_doc_length_ =
      docs.empty() ? 0.0
                   : static_cast<double>(total_length) /
                         static_cast<double>(docs.size());
  return index;
}

std::uint32_t SparseIndex::doc_length(DocId doc_id) const {
  if (doc_id < 0 || static_cast<std::size_t>(doc_id) >= doc_lengths_.size()) {
    fail(ErrorCode::kNotFound,
         "unknown doc_id " + std::to_string(doc_id) + " in sparse index");
  }
  return doc_lengths_[static_cast<std::size_t>(doc_id)];
}

std::span<const Posting> SparseIndex::postings(std::string_view term) const {
  auto it = postings_.find(term);
  if (it == postings_.end()) return {};
  return it->second;
}

std::size_t SparseIndex::document_frequency(std::string_view term) const {
  return postings(term).size();
}

double SparseIndex::idf(std::string_view term) const {
  const double n = static_cast<double>(num_docs());
  const double df = static_cast<double>(document_frequency(term));
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

double SparseIndex::score(std::span<const std::string> query_terms,
                          DocId doc_id, const BM25Params& params) const {
  const double dl = static_cast<double>(doc_length(doc_id));
  double total = 0.0;
  for (const auto& term : distinct_terms(query_terms)) {
    const auto list = postings(term);
    auto it = std::lower_bound(
        list.begin(), list.end(), doc_id,
        [](const Posting& p, DocId id) { return p.doc_id < id; });
    if (it == list.end() || it->doc_id != doc_id) continue;

    const double tf = static_cast<double>(it->term_frequency);
    const double norm =
        1.0 - params.b + params.b * dl / avg_doc_length_;
    total += idf(term) * (tf * (params.k1 + 1.0)) / (tf + params.k1 * norm);
  }
  return total;
}

std::vector<DocId> SparseIndex::matching_docs(
    std::span<const std::string> terms) const {
  std::vector<DocId> ids;
  for (const auto& term : distinct_terms(terms)) {
    for (const auto& p : postings(term)) ids.push_back(p.doc_id);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::vector<DocScore> SparseIndex::top_docs(std::string_view query,
                                            std::size_t n) const {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "top-n must be >= 1");
  const auto terms = tokenize(query);
  std::vector<DocScore> scored;
  for (const DocId id : matching_docs(terms)) {
    scored.push_back({id, score(terms, id)});
  }
  auto better = [](const DocScore& a, const DocScore& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  };
  if (scored.size() > n) {
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n),
                      scored.end(), better);
    scored.resize(n);
  } else {
    std::sort(scored.begin(), scored.end(), better);
  }
  return scored;
}

void SparseIndex::save(std::ostream& out) const {
  using namespace binary;
  put_magic(out, kMagic);
  put_u32(out, kFormatVersion);
  put_f64(out, params_.k1);
  put_f64(out, params_.b);
  put_u64(out, doc_lengths_.size());
  put_f64(out, avg_doc_length_);
  put_u64(out, postings_.size());
  for (const auto len : doc_lengths_) put_u32(out, len);

  std::vector<const PostingMap::value_type*> entries;
  entries.reserve(postings_.size());
  for (const auto& e : postings_) entries.push_back(&e);
  std::sort(entries.begin(), entries.end(),
            [](auto* a, auto* b) { return a->first < b->first; });
  for (const auto* e : entries) {
    put_string(out, e->first);
    put_u64(out, e->second.size());
    for (const auto& p : e->second) {
      put_i64(out, p.doc_id);
      put_u32(out, p.term_frequency);
    }
  }
  if (!out) fail(ErrorCode::kIo, "failed writing sparse index");
}

SparseIndex SparseIndex::load(std::istream& in) {
  binary::Reader r(in, "sparse index");
  r.expect_magic(kMagic);
  const auto version = r.u32();
  if (version != kFormatVersion) {
    fail(ErrorCode::kParse,
         "sparse index format version " + std::to_string(version) +
             " is not supported");
  }
  SparseIndex index;
  index.params_.k1 = r.f64();
  index.params_.b = r.f64();
  index.params_.validate();
  const auto num_docs = r.count(1ULL << 32);
  index.avg_doc_length_ = r.f64();
  const auto num_terms = r.count(1ULL << 34);
  index.doc_lengths_.resize(num_docs);
  for (auto& len : index.doc_lengths_) len = r.u32();
  index.postings_.reserve(num_terms);
  for (std::uint64_t t = 0; t < num_terms; ++t) {
    auto term = r.string(1 << 20);
    const auto count = r.count(num_docs);
    std::vector<Posting> list(count);
    for (auto& p : list) {
      p.doc_id = r.i64();
      p.term_frequency = r.u32();
      if (p.doc_id < 0 || static_cast<std::uint64_t>(p.doc_id) >= num_docs ||
          p.term_frequency == 0) {
        fail(ErrorCode::kParse, "sparse index: corrupt posting");
      }
    }
    index.postings_.emplace(std::move(term), std::move(list));
  }
  return index;
}

bool operator==(const SparseIndex& a, const SparseIndex& b) {
  if (a.params_.k1 != b.params_.k1 || a.params_.b != b.params_.b ||
      a.doc_lengths_ != b.doc_lengths_ ||
      a.avg_doc_length_ != b.avg_doc_length_ ||
      a.postings_.size() != b.postings_.size()) {
    return false;
  }
  for (const auto& [term, list] : a.postings_) {
    auto it = b.postings_.find(term);
    if (it == b.postings_.end() || it->second.size() != list.size()) return false;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].doc_id != it->second[i].doc_id ||
          list[i].term_frequency != it->second[i].term_frequency) {
        return false;
      }
    }
  }
  return true;
}

double bm25_score(const SparseIndex& index,
                  std::span<const std::string> query_terms, DocId doc_id,
                  const BM25Params& params) {
  return index.score(query_terms, doc_id, params);
}

std::vector<DocScore> bm25_top_docs(const SparseIndex& index,
                                    std::string_view query, std::size_t n) {
  return index.top_docs(query, n);
}

}  // namespace hybridrag
