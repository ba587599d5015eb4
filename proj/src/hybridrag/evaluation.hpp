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

// Strategy evaluation, boost and chunk-size sweeps, and null-rate accounting.
// Queries are evaluated independently (optionally in parallel); every report
// lists rows in dataset order and aggregates them in that order, so results
// do not depend on the thread count.

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hybridrag/datasets.hpp"
#include "hybridrag/engine.hpp"

namespace hybridrag {

struct QueryEvaluation {
  std::string query;
  double ndcg = 0.0;
  std::vector<std::string> retrieved_urls;
};

struct EvalReport {
  Strategy strategy = Strategy::kHybridHost;
  FusionConfig fusion;  // echo; fusion.top_k is the k of nDCG@k
  std::vector<QueryEvaluation> per_query;
  double mean_ndcg = 0.0;  // sum of per_query ndcg in order, divided by count
};

// Throws kInvalidArgument on an empty golden set.
EvalReport evaluate_strategy(const SearchEngine& engine,
                             std::span<const GoldenExample> golden,
                             Strategy strategy, const FusionConfig& cfg,
                             const HostBoostTable& hosts, unsigned threads = 1);

struct SweepCell {
  double bm25_boost = 0.0;
  double host_boost = 0.0;
  double mean_ndcg = 0.0;
};

struct SweepReport {
  Strategy strategy = Strategy::kHybridHost;
  std::vector<SweepCell> cells;  // grid order
  std::size_t best = 0;          // index into cells
};

using BoostGrid = std::vector<std::pair<double, double>>;  // (bm25, host)

// "b1,b2,...xh1,h2,..." -> cartesian product, bm25 boost outermost.
BoostGrid parse_grid(std::string_view spec);

// Runs `strategy` (hybrid_host unless stated) for every cell with the cell's
// boosts substituted into `base`. The best cell maximizes mean nDCG; exact
// ties go to the lexicographically smaller (bm25_boost, host_boost).
SweepReport sweep_boosts(const SearchEngine& engine,
                         std::span<const GoldenExample> golden,
                         const BoostGrid& grid, const FusionConfig& base,
                         const HostBoostTable& hosts, unsigned threads = 1,
                         Strategy strategy = Strategy::kHybridHost);

struct ChunkSizeRow {
  ChunkingConfig chunking;
  std::size_t num_chunks = 0;
  double mean_ndcg = 0.0;
};

// "1000:100,2000:500" -> chunking configs (target:overlap), each validated.
std::vector<ChunkingConfig> parse_chunk_sizes(std::string_view spec,
                                              std::string_view delimiters = ".!?\n");

// Rebuilds the index per config and evaluates dense_only.
std::vector<ChunkSizeRow> chunk_size_experiment(
    std::span<const Document> docs, std::span<const GoldenExample> golden,
    std::span<const ChunkingConfig> configs,
    std::shared_ptr<const Embedder> embedder, const BM25Params& bm25,
    const FusionConfig& fusion, unsigned threads = 1);

struct NegativeOutcome {
  NegativeExample example;
  bool answered = false;
};

struct NullRateRow {
  NegativeCategory category = NegativeCategory::kJailbreak;
  std::size_t total = 0;
  std::size_t nulls = 0;
  std::optional<double> rate;  // nulls / total; empty when total == 0
};

struct NullRateReport {
  std::vector<NullRateRow> rows;  // one per category, jailbreak/nsfw/irrelevant

  const NullRateRow& row(NegativeCategory c) const;
};

NullRateReport null_rate(std::span<const NegativeOutcome> outcomes);

// Answer generation used by the negative suite and the judged evaluation.
struct GeneratedAnswer {
  std::string text;     // empty means "no answer"
  std::string context;  // the retrieved text the answer was drawn from
};

using Answerer = std::function<GeneratedAnswer(
    std::string_view query, std::span<const ScoredDocument> hits)>;

// Returns the top hit's best-matching chunk, or an empty answer when there
// are no hits or that chunk's cosine to the query is below `min_relevance`.
// The context is the best chunk of every hit, blank-line separated.
Answerer extractive_answerer(const SearchEngine& engine, double min_relevance);

}  // namespace hybridrag
