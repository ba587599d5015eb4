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

// Application configuration shared by every command.
//
// Values are addressed by flat dotted keys. A JSON config file uses the same
// keys as nested objects, e.g. {"fusion": {"bm25_boost": 0.6}}; numbers may
// be given as JSON numbers or strings. Host weights can be listed inline
// under "hosts": {"weights": {"host": weight}}.
//
//   index_dir                  string
//   threads                    0 = all hardware threads
//   chunking.target_size       bytes, >= 1
//   chunking.overlap           bytes, < target_size
//   chunking.sentence_delimiters
//   bm25.k1, bm25.b
//   fusion.strategy            bm25_only | dense_only | hybrid | hybrid_host
//   fusion.bm25_boost, fusion.host_boost, fusion.top_k,
//   fusion.dense_candidates, fusion.sparse_candidates,
//   fusion.bm25_normalization  per_query_max | raw
//   hosts.file                 "host weight" lines
//   guard.threshold            [0, 1]
//   guard.system_prompt_file   defaults to a built-in prompt
//   answer.min_relevance       extractive answer floor
//   embedder                   reference[:dims] | projection:<model-file> |
//                              process:<command> | http://...
//   judge.spec                 "" (off) | mock | process:... | http://...
//   judge.product
//   golden.delimiter           single character
//   train.batch_size, train.epochs, train.learning_rate,
//   train.temperature, train.seed
//
// Precedence, lowest first: defaults, config file, environment
// (HYBRIDRAG_INDEX_DIR, HYBRIDRAG_EMBEDDER, HYBRIDRAG_JUDGE,
// HYBRIDRAG_THREADS), explicit settings.

#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hybridrag/contrastive.hpp"
#include "hybridrag/corpus.hpp"
#include "hybridrag/fusion.hpp"
#include "hybridrag/guardrail.hpp"
#include "hybridrag/sparse_index.hpp"

namespace hybridrag {

struct AppConfig {
  std::string index_dir = "hybridrag-index";
  unsigned threads = 0;
  ChunkingConfig chunking;
  BM25Params bm25;
  FusionConfig fusion;
  Strategy strategy = Strategy::kHybridHost;
  std::string hosts_file;
  HostBoostTable inline_hosts;
  GuardConfig guard;
  std::string system_prompt_file;
  double answer_min_relevance = 0.25;
  std::string embedder = "reference";
  bool embedder_explicit = false;  // false: reuse the spec stored in an index
  std::string judge;
  std::string judge_product = "the product";
  char golden_delimiter = ';';
  TrainConfig train;

  // Throws kInvalidArgument for unknown keys and kParse for values that do
  // not parse. Range and cross-field checks wait for validate(), so keys can
  // be set in any order.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;
  static const std::vector<std::string>& keys();

  void load_json(std::string_view json_text);
  void load_file(const std::filesystem::path& path);
  void apply_env();

  void validate() const;

  // File table (if any) overlaid with inline weights.
  HostBoostTable host_table() const;
  std::string system_prompt() const;
};

std::shared_ptr<const Embedder> make_embedder(const std::string& spec);

}  // namespace hybridrag
