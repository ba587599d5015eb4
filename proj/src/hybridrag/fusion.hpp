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

// Hybrid scoring. Each candidate document gets
//
//   total = max chunk cosine + bm25_boost * bm25 + host_boost * host_weight
//
// where bm25 is normalized by the per-query maximum unless raw mode is
// selected, and host_weight comes from a HostBoostTable.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybridrag/corpus.hpp"
#include "hybridrag/dense_index.hpp"
#include "hybridrag/sparse_index.hpp"

namespace hybridrag {

// Weights in [0, 1] keyed by lowercased host. Absent hosts weigh 0.
class HostBoostTable {
 public:
  void set(std::string_view host, double weight);
  double lookup(std::string_view host) const;
  bool empty() const { return weights_.empty(); }
  std::size_t size() const { return weights_.size(); }
  const std::map<std::string, double, std::less<>>& weights() const { return weights_; }

  // One "host weight" pair per line; blank lines and '#' comments skipped.
  static HostBoostTable parse(std::istream& in);
  static HostBoostTable load(const std::filesystem::path& path);

  friend bool operator==(const HostBoostTable&, const HostBoostTable&) = default;

 private:
  std::map<std::string, double, std::less<>> weights_;
};

enum class Strategy { kBm25Only, kDenseOnly, kHybrid, kHybridHost };

const char* strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);
bool uses_dense(Strategy s);
bool uses_sparse(Strategy s);

enum class Bm25Normalization { kPerQueryMax, kRaw };

const char* normalization_name(Bm25Normalization n);
std::optional<Bm25Normalization> parse_normalization(std::string_view name);

struct FusionConfig {
  double bm25_boost = 0.3;
  double host_boost = 0.1;
  std::size_t top_k = 3;
  std::size_t dense_candidates = 50;   // chunks
  std::size_t sparse_candidates = 50;  // documents
  Bm25Normalization bm25_normalization = Bm25Normalization::kPerQueryMax;

  void validate() const;
};

struct FusedScore {
  double total = 0.0;
  double cosine_term = 0.0;
  double bm25_term = 0.0;
  double host_term = 0.0;
};

struct ScoredDocument {
  DocId doc_id = 0;
  std::string url;
  double total = 0.0;  // == cosine_term + bm25_term + host_term
  double cosine_term = 0.0;
  double bm25_term = 0.0;
  double host_term = 0.0;
};

// Read-only view over the components of a built index.
struct RetrievalView {
  std::span<const Document> docs;
  const SparseIndex& sparse;
  const DenseIndex& dense;
};

// Union of the owners of the top dense_candidates chunks (dense strategies)
// and the top sparse_candidates BM25 documents (sparse strategies), sorted
// ascending. `query_vec` may be null for bm25_only.
std::vector<DocId> candidate_set(const RetrievalView& view,
                                 std::string_view query,
                                 const EmbeddingVector* query_vec,
                                 const FusionConfig& cfg, Strategy strategy);

std::map<DocId, double> normalize_bm25(const std::map<DocId, double>& scores,
                                       Bm25Normalization mode);

FusedScore fuse_score(double cos_max, double bm25_norm, double host_weight,
                      const FusionConfig& cfg);

// Scores every candidate under the strategy and returns at most top_k
// documents, best first, ties by ascending doc_id.
std::vector<ScoredDocument> search(const RetrievalView& view,
                                   std::string_view query,
                                   const EmbeddingVector* query_vec,
                                   Strategy strategy, const FusionConfig& cfg,
                                   const HostBoostTable& hosts);

}  // namespace hybridrag
