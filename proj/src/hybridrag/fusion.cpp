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

#include "hybridrag/fusion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "hybridrag/error.hpp"

namespace hybridrag {

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace

void HostBoostTable::set(std::string_view host, double weight) {
  if (host.empty()) fail(ErrorCode::kInvalidArgument, "empty host in boost table");
  if (!(weight >= 0.0 && weight <= 1.0)) {
    fail(ErrorCode::kInvalidArgument,
         "host weight for '" + std::string(host) + "' must lie in [0, 1]");
  }
  weights_[lowercase(host)] = weight;
}

double HostBoostTable::lookup(std::string_view host) const {
  auto it = weights_.find(host);
  if (it == weights_.end()) {
    it = weights_.find(lowercase(host));
    if (it == weights_.end()) return 0.0;
  }
  return it->second;
}

HostBoostTable HostBoostTable::parse(std::istream& in) {
  HostBoostTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string host, weight_text, extra;
    if (!(fields >> host)) continue;
    if (!(fields >> weight_text) || (fields >> extra)) {
      fail(ErrorCode::kParse, "host table line " + std::to_string(line_no) +
                                  ": expected 'host weight'");
    }
    double weight = 0.0;
    const auto [ptr, ec] = std::from_chars(
        weight_text.data(), weight_text.data() + weight_text.size(), weight);
    if (ec != std::errc() || ptr != weight_text.data() + weight_text.size()) {
      fail(ErrorCode::kParse, "host table line " + std::to_string(line_no) +
                                  ": bad weight '" + weight_text + "'");
    }
    try {
      table.set(host, weight);
    } catch (const Error& e) {
      fail(ErrorCode::kParse,
           "host table line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return table;
}

HostBoostTable HostBoostTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open host table: " + path.string());
  return parse(in);
}

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kBm25Only: return "bm25_only";
    case Strategy::kDenseOnly: return "dense_only";
    case Strategy::kHybrid: return "hybrid";
    case Strategy::kHybridHost: return "hybrid_host";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  for (const auto s : {Strategy::kBm25Only, Strategy::kDenseOnly,
                       Strategy::kHybrid, Strategy::kHybridHost}) {
    if (name == strategy_name(s)) return s;
  }
  return std::nullopt;
}

bool uses_dense(Strategy s) { return s != Strategy::kBm25Only; }
bool uses_sparse(Strategy s) { return s != Strategy::kDenseOnly; }

const char* normalization_name(Bm25Normalization n) {
  return n == Bm25Normalization::kRaw ? "raw" : "per_query_max";
}

std::optional<Bm25Normalization> parse_normalization(std::string_view name) {
  if (name == "per_query_max") return Bm25Normalization::kPerQueryMax;
  if (name == "raw") return Bm25Normalization::kRaw;
  return std::nullopt;
}

void FusionConfig::validate() const {
  if (!(bm25_boost >= 0.0) || !std::isfinite(bm25_boost)) {
    fail(ErrorCode::kInvalidArgument, "bm25_boost must be a finite value >= 0");
  }
  if (!(host_boost >= 0.0) || !std::isfinite(host_boost)) {
    fail(ErrorCode::kInvalidArgument, "host_boost must be a finite value >= 0");
  }
  if (top_k < 1) fail(ErrorCode::kInvalidArgument, "top_k must be >= 1");
  if (dense_candidates < top_k || sparse_candidates < top_k) {
    fail(ErrorCode::kInvalidArgument, "candidate counts must be >= top_k");
  }
}

std::vector<DocId> candidate_set(const RetrievalView& view,
                                 std::string_view query,
                                 const EmbeddingVector* query_vec,
                                 const FusionConfig& cfg, Strategy strategy) {
  std::vector<DocId> ids;
  if (uses_dense(strategy)) {
    if (query_vec == nullptr) {
      fail(ErrorCode::kInvalidArgument, "dense strategy needs a query vector");
    }
    for (const auto& hit : view.dense.top_chunks(*query_vec, cfg.dense_candidates)) {
      ids.push_back(view.dense.doc_of(hit.chunk_id));
    }
  }
  if (uses_sparse(strategy)) {
    for (const auto& hit : view.sparse.top_docs(query, cfg.sparse_candidates)) {
      ids.push_back(hit.doc_id);
    }
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::map<DocId, double> normalize_bm25(const std::map<DocId, double>& scores,
                                       Bm25Normalization mode) {
  if (mode == Bm25Normalization::kRaw) return scores;
  double max_score = 0.0;
  for (const auto& [id, s] : scores) max_score = std::max(max_score, s);
  std::map<DocId, double> out;
  for (const auto& [id, s] : scores) {
    out.emplace(id, max_score > 0.0 ? s / max_score : 0.0);
  }
  return out;
}

FusedScore fuse_score(double cos_max, double bm25_norm, double host_weight,
                      const FusionConfig& cfg) {
  FusedScore f;
  f.cosine_term = cos_max;
  f.bm25_term = cfg.bm25_boost * bm25_norm;
  f.host_term = cfg.host_boost * host_weight;
  f.total = f.cosine_term + f.bm25_term + f.host_term;
  return f;
}

std::vector<ScoredDocument> search(const RetrievalView& view,
                                   std::string_view query,
                                   const EmbeddingVector* query_vec,
                                   Strategy strategy, const FusionConfig& cfg,
                                   const HostBoostTable& hosts) {
  cfg.validate();
  const auto candidates = candidate_set(view, query, query_vec, cfg, strategy);
  if (candidates.empty()) return {};

  const auto terms = tokenize(query);
  std::map<DocId, double> bm25_raw;
  if (uses_sparse(strategy)) {
    for (const DocId id : candidates) bm25_raw.emplace(id, view.sparse.score(terms, id));
  }
  const auto bm25_norm = normalize_bm25(bm25_raw, cfg.bm25_normalization);

  std::vector<ScoredDocument> scored;
  scored.reserve(candidates.size());
  for (const DocId id : candidates) {
    const auto& doc = view.docs[static_cast<std::size_t>(id)];
    FusedScore f;
    switch (strategy) {
      case Strategy::kBm25Only:
        f.bm25_term = bm25_raw.at(id);
        f.total = f.cosine_term + f.bm25_term + f.host_term;
        break;
      case Strategy::kDenseOnly:
        f.cosine_term = view.dense.max_chunk_cosine(id, *query_vec);
        f.total = f.cosine_term + f.bm25_term + f.host_term;
        break;
      case Strategy::kHybrid:
        f = fuse_score(view.dense.max_chunk_cosine(id, *query_vec),
                       bm25_norm.at(id), 0.0, cfg);
        break;
      case Strategy::kHybridHost:
        f = fuse_score(view.dense.max_chunk_cosine(id, *query_vec),
                       bm25_norm.at(id), hosts.lookup(doc.host), cfg);
        break;
    }
    scored.push_back({id, doc.url, f.total, f.cosine_term, f.bm25_term, f.host_term});
  }

  auto better = [](const ScoredDocument& a, const ScoredDocument& b) {
    if (a.total != b.total) return a.total > b.total;
    return a.doc_id < b.doc_id;
  };
  const std::size_t k = std::min(cfg.top_k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k),
                    scored.end(), better);
  scored.resize(k);
  return scored;
}

}  // namespace hybridrag
