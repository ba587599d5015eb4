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

#include "hybridrag/evaluation.hpp"

#include <charconv>
#include <cmath>

#include "hybridrag/error.hpp"
#include "hybridrag/metrics.hpp"
#include "hybridrag/parallel.hpp"

namespace hybridrag {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? next : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

double parse_boost(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(v) || v < 0.0) {
    fail(ErrorCode::kParse, "bad boost value \"" + std::string(text) + "\"");
  }
  return v;
}

std::size_t parse_size(std::string_view text) {
  text = trim(text);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    fail(ErrorCode::kParse, "bad size \"" + std::string(text) + "\"");
  }
  return v;
}

// Query embeddings do not depend on boosts or chunking, so sweeps compute
// them once.
std::vector<EmbeddingVector> embed_queries(const Embedder& embedder,
                                           std::span<const GoldenExample> golden,
                                           Strategy strategy) {
  if (!uses_dense(strategy)) return {};
  std::vector<std::string> texts;
  texts.reserve(golden.size());
  for (const auto& g : golden) texts.push_back(g.query);
  return embedder.embed_batch(texts);
}

EvalReport evaluate_with(const SearchEngine& engine,
                         std::span<const GoldenExample> golden,
                         std::span<const EmbeddingVector> query_vecs,
                         Strategy strategy, const FusionConfig& cfg,
                         const HostBoostTable& hosts, unsigned threads) {
  if (golden.empty()) fail(ErrorCode::kInvalidArgument, "golden dataset is empty");
  cfg.validate();
  EvalReport report;
  report.strategy = strategy;
  report.fusion = cfg;
  report.per_query.resize(golden.size());
  parallel_for(golden.size(), threads, [&](std::size_t i) {
    const auto& g = golden[i];
    const EmbeddingVector* qv = query_vecs.empty() ? nullptr : &query_vecs[i];
    const auto hits = search(engine.view(), g.query, qv, strategy, cfg, hosts);
    auto& row = report.per_query[i];
    row.query = g.query;
    for (const auto& h : hits) row.retrieved_urls.push_back(h.url);
    const auto rels = relevance_vector(row.retrieved_urls, g.relevant_urls);
    row.ndcg = ndcg_at_k(rels, distinct_relevant(g.relevant_urls), cfg.top_k);
  });
  double sum = 0.0;
  for (const auto& row : report.per_query) sum += row.ndcg;
  report.mean_ndcg = sum / static_cast<double>(report.per_query.size());
  return report;
}

}  // namespace

EvalReport evaluate_strategy(const SearchEngine& engine,
                             std::span<const GoldenExample> golden,
                             Strategy strategy, const FusionConfig& cfg,
                             const HostBoostTable& hosts, unsigned threads) {
  const auto qv = embed_queries(engine.embedder(), golden, strategy);
  return evaluate_with(engine, golden, qv, strategy, cfg, hosts, threads);
}

BoostGrid parse_grid(std::string_view spec) {
  const auto halves = split(spec, 'x');
  if (halves.size() != 2) {
    fail(ErrorCode::kParse, "grid must look like \"b1,b2,...xh1,h2,...\"");
  }
  std::vector<double> bm25, host;
  for (const auto v : split(halves[0], ',')) bm25.push_back(parse_boost(v));
  for (const auto v : split(halves[1], ',')) host.push_back(parse_boost(v));
  BoostGrid grid;
  for (const double b : bm25) {
    for (const double h : host) grid.emplace_back(b, h);
  }
  return grid;
}

SweepReport sweep_boosts(const SearchEngine& engine,
                         std::span<const GoldenExample> golden,
                         const BoostGrid& grid, const FusionConfig& base,
                         const HostBoostTable& hosts, unsigned threads,
                         Strategy strategy) {
  if (grid.empty()) fail(ErrorCode::kInvalidArgument, "boost grid is empty");
  const auto qv = embed_queries(engine.embedder(), golden, strategy);
  SweepReport report;
  report.strategy = strategy;
  for (const auto& [b, h] : grid) {
    FusionConfig cfg = base;
    cfg.bm25_boost = b;
    cfg.host_boost = h;
    const auto eval = evaluate_with(engine, golden, qv, strategy, cfg, hosts, threads);
    report.cells.push_back({b, h, eval.mean_ndcg});
  }
  for (std::size_t i = 1; i < report.cells.size(); ++i) {
    const auto& c = report.cells[i];
    const auto& best = report.cells[report.best];
    const bool better = c.mean_ndcg > best.mean_ndcg ||
                        (c.mean_ndcg == best.mean_ndcg &&
                         std::pair(c.bm25_boost, c.host_boost) <
                             std::pair(best.bm25_boost, best.host_boost));
    if (better) report.best = i;
  }
  return report;
}

std::vector<ChunkingConfig> parse_chunk_sizes(std::string_view spec,
                                              std::string_view delimiters) {
  std::vector<ChunkingConfig> out;
  for (const auto item : split(spec, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) {
      fail(ErrorCode::kParse, "chunk size \"" + std::string(item) +
                                  "\" must look like target:overlap");
    }
    ChunkingConfig c;
    c.target_size = parse_size(parts[0]);
    c.overlap = parse_size(parts[1]);
    c.sentence_delimiters = std::string(delimiters);
    c.validate();
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<ChunkSizeRow> chunk_size_experiment(
    std::span<const Document> docs, std::span<const GoldenExample> golden,
    std::span<const ChunkingConfig> configs,
    std::shared_ptr<const Embedder> embedder, const BM25Params& bm25,
    const FusionConfig& fusion, unsigned threads) {
  if (!embedder) fail(ErrorCode::kInvalidArgument, "chunk-size experiment needs an embedder");
  const auto qv = embed_queries(*embedder, golden, Strategy::kDenseOnly);
  std::vector<ChunkSizeRow> rows;
  for (const auto& c : configs) {
    const auto engine = SearchEngine::build(std::vector<Document>(docs.begin(), docs.end()),
                                            c, bm25, embedder, threads);
    const auto eval = evaluate_with(engine, golden, qv, Strategy::kDenseOnly, fusion,
                                    HostBoostTable{}, threads);
    rows.push_back({c, engine.chunks().size(), eval.mean_ndcg});
  }
  return rows;
}

const NullRateRow& NullRateReport::row(NegativeCategory c) const {
  for (const auto& r : rows) {
    if (r.category == c) return r;
  }
  fail(ErrorCode::kNotFound, std::string("no row for category ") + category_name(c));
}

NullRateReport null_rate(std::span<const NegativeOutcome> outcomes) {
  NullRateReport report;
  for (const auto c : kAllNegativeCategories) {
    NullRateRow row;
    row.category = c;
    for (const auto& o : outcomes) {
      if (o.example.category != c) continue;
      ++row.total;
      if (!o.answered) ++row.nulls;
    }
    if (row.total > 0) {
      row.rate = static_cast<double>(row.nulls) / static_cast<double>(row.total);
    }
    report.rows.push_back(row);
  }
  return report;
}

Answerer extractive_answerer(const SearchEngine& engine, double min_relevance) {
  return [&engine, min_relevance](std::string_view query,
                                  std::span<const ScoredDocument> hits) {
    GeneratedAnswer out;
    if (hits.empty()) return out;
    const auto q = engine.embed_query(query);
    for (std::size_t i = 0; i < hits.size(); ++i) {
      const Chunk* c = engine.best_chunk(hits[i].doc_id, q);
      if (!c) continue;
      if (!out.context.empty()) out.context += "\n\n";
      out.context += c->text;
      if (i == 0) {
        const double rel =
            cosine(engine.dense().vector(c->chunk_id), std::span<const double>(q.values));
        if (rel >= min_relevance) out.text = c->text;
      }
    }
    return out;
  };
}

}  // namespace hybridrag
