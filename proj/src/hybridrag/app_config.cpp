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

#include "hybridrag/app_config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hybridrag/error.hpp"
#include "hybridrag/transport.hpp"

namespace hybridrag {

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value,
                            std::string_view why) {
  fail(ErrorCode::kParse, "config " + std::string(key) + " = \"" + std::string(value) +
                              "\": " + std::string(why));
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    bad_value(key, v, "expected a finite number");
  }
  return out;
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    bad_value(key, v, "expected a non-negative integer");
  }
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void flatten(const nlohmann::json& j, const std::string& prefix, AppConfig& cfg) {
  for (const auto& [k, v] : j.items()) {
    const std::string key = prefix.empty() ? k : prefix + "." + k;
    if (key == "hosts.weights") {
      if (!v.is_object()) fail(ErrorCode::kParse, "config hosts.weights must be an object");
      for (const auto& [host, w] : v.items()) {
        if (!w.is_number()) {
          fail(ErrorCode::kParse, "config host weight for " + host + " must be a number");
        }
        cfg.inline_hosts.set(host, w.get<double>());
      }
    } else if (v.is_object()) {
      flatten(v, key, cfg);
    } else if (v.is_string()) {
      cfg.set(key, v.get<std::string>());
    } else if (v.is_number() || v.is_boolean()) {
      cfg.set(key, v.dump());
    } else {
      fail(ErrorCode::kParse, "config " + key + " has an unsupported value type");
    }
  }
}

}  // namespace

const std::vector<std::string>& AppConfig::keys() {
  static const std::vector<std::string> k = {
      "index_dir", "threads", "chunking.target_size", "chunking.overlap",
      "chunking.sentence_delimiters", "bm25.k1", "bm25.b", "fusion.strategy",
      "fusion.bm25_boost", "fusion.host_boost", "fusion.top_k", "fusion.dense_candidates",
      "fusion.sparse_candidates", "fusion.bm25_normalization", "hosts.file",
      "guard.threshold", "guard.system_prompt_file", "answer.min_relevance", "embedder",
      "judge.spec", "judge.product", "golden.delimiter", "train.batch_size",
      "train.epochs", "train.learning_rate", "train.temperature", "train.seed"};
  return k;
}

void AppConfig::set(std::string_view key, std::string_view value) {
  if (key == "index_dir") {
    index_dir = value;
  } else if (key == "threads") {
    const auto t = to_u64(key, value);
    if (t > 4096) bad_value(key, value, "at most 4096 threads");
    threads = static_cast<unsigned>(t);
  } else if (key == "chunking.target_size") {
    chunking.target_size = to_u64(key, value);
  } else if (key == "chunking.overlap") {
    chunking.overlap = to_u64(key, value);
  } else if (key == "chunking.sentence_delimiters") {
    chunking.sentence_delimiters = value;
  } else if (key == "bm25.k1") {
    bm25.k1 = to_double(key, value);
  } else if (key == "bm25.b") {
    bm25.b = to_double(key, value);
  } else if (key == "fusion.strategy") {
    const auto s = parse_strategy(value);
    if (!s) bad_value(key, value, "unknown strategy");
    strategy = *s;
  } else if (key == "fusion.bm25_boost") {
    fusion.bm25_boost = to_double(key, value);
  } else if (key == "fusion.host_boost") {
    fusion.host_boost = to_double(key, value);
  } else if (key == "fusion.top_k") {
    fusion.top_k = to_u64(key, value);
  } else if (key == "fusion.dense_candidates") {
    fusion.dense_candidates = to_u64(key, value);
  } else if (key == "fusion.sparse_candidates") {
    fusion.sparse_candidates = to_u64(key, value);
  } else if (key == "fusion.bm25_normalization") {
    const auto n = parse_normalization(value);
    if (!n) bad_value(key, value, "expected per_query_max or raw");
    fusion.bm25_normalization = *n;
  } else if (key == "hosts.file") {
    hosts_file = value;
  } else if (key == "guard.threshold") {
    guard.threshold = to_double(key, value);
  } else if (key == "guard.system_prompt_file") {
    system_prompt_file = value;
  } else if (key == "answer.min_relevance") {
    answer_min_relevance = to_double(key, value);
  } else if (key == "embedder") {
    if (value.empty()) bad_value(key, value, "empty embedder spec");
    embedder = value;
    embedder_explicit = true;
  } else if (key == "judge.spec") {
    judge = value;
  } else if (key == "judge.product") {
    judge_product = value;
  } else if (key == "golden.delimiter") {
    if (value.size() != 1) bad_value(key, value, "expected a single character");
    golden_delimiter = value[0];
  } else if (key == "train.batch_size") {
    train.batch_size = to_u64(key, value);
  } else if (key == "train.epochs") {
    train.epochs = to_u64(key, value);
  } else if (key == "train.learning_rate") {
    train.learning_rate = to_double(key, value);
  } else if (key == "train.temperature") {
    train.temperature = to_double(key, value);
  } else if (key == "train.seed") {
    train.seed = to_u64(key, value);
  } else {
    fail(ErrorCode::kInvalidArgument, "unknown config key \"" + std::string(key) + "\"");
  }
}

std::string AppConfig::get(std::string_view key) const {
  if (key == "index_dir") return index_dir;
  if (key == "threads") return std::to_string(threads);
  if (key == "chunking.target_size") return std::to_string(chunking.target_size);
  if (key == "chunking.overlap") return std::to_string(chunking.overlap);
  if (key == "chunking.sentence_delimiters") return chunking.sentence_delimiters;
  if (key == "bm25.k1") return num(bm25.k1);
  if (key == "bm25.b") return num(bm25.b);
  if (key == "fusion.strategy") return strategy_name(strategy);
  if (key == "fusion.bm25_boost") return num(fusion.bm25_boost);
  if (key == "fusion.host_boost") return num(fusion.host_boost);
  if (key == "fusion.top_k") return std::to_string(fusion.top_k);
  if (key == "fusion.dense_candidates") return std::to_string(fusion.dense_candidates);
  if (key == "fusion.sparse_candidates") return std::to_string(fusion.sparse_candidates);
  if (key == "fusion.bm25_normalization") return normalization_name(fusion.bm25_normalization);
  if (key == "hosts.file") return hosts_file;
  if (key == "guard.threshold") return num(guard.threshold);
  if (key == "guard.system_prompt_file") return system_prompt_file;
  if (key == "answer.min_relevance") return num(answer_min_relevance);
  if (key == "embedder") return embedder;
  if (key == "judge.spec") return judge;
  if (key == "judge.product") return judge_product;
  if (key == "golden.delimiter") return std::string(1, golden_delimiter);
  if (key == "train.batch_size") return std::to_string(train.batch_size);
  if (key == "train.epochs") return std::to_string(train.epochs);
  if (key == "train.learning_rate") return num(train.learning_rate);
  if (key == "train.temperature") return num(train.temperature);
  if (key == "train.seed") return std::to_string(train.seed);
  fail(ErrorCode::kInvalidArgument, "unknown config key \"" + std::string(key) + "\"");
}

void AppConfig::load_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::kParse, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::kParse, "config must be a JSON object");
  flatten(j, "", *this);
}

void AppConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  load_json(ss.str());
}

void AppConfig::apply_env() {
  static const std::pair<const char*, const char*> kVars[] = {
      {"HYBRIDRAG_INDEX_DIR", "index_dir"},
      {"HYBRIDRAG_EMBEDDER", "embedder"},
      {"HYBRIDRAG_JUDGE", "judge.spec"},
      {"HYBRIDRAG_THREADS", "threads"}};
  for (const auto& [var, key] : kVars) {
    if (const char* v = std::getenv(var); v && *v) set(key, v);
  }
}

void AppConfig::validate() const {
  chunking.validate();
  bm25.validate();
  fusion.validate();
  guard.validate();
  train.validate();
  if (!std::isfinite(answer_min_relevance)) {
    fail(ErrorCode::kInvalidArgument, "answer.min_relevance must be finite");
  }
}

HostBoostTable AppConfig::host_table() const {
  HostBoostTable t = hosts_file.empty() ? HostBoostTable{} : HostBoostTable::load(hosts_file);
  for (const auto& [host, w] : inline_hosts.weights()) t.set(host, w);
  return t;
}

std::string AppConfig::system_prompt() const {
  if (system_prompt_file.empty()) return std::string(kDefaultSystemPrompt);
  std::ifstream in(system_prompt_file, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot read system prompt " + system_prompt_file);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::shared_ptr<const Embedder> make_embedder(const std::string& spec) {
  if (spec == "reference") return std::make_shared<ReferenceEmbedder>();
  if (spec.rfind("reference:", 0) == 0) {
    const std::string_view dims = std::string_view(spec).substr(10);
    const auto d = to_u64("embedder", dims);
    if (d < 8 || d > (1u << 16)) {
      fail(ErrorCode::kInvalidArgument, "reference embedder dims must lie in [8, 65536]");
    }
    return std::make_shared<ReferenceEmbedder>(static_cast<std::size_t>(d));
  }
  if (spec.rfind("projection:", 0) == 0) {
    return std::make_shared<ProjectionEmbedder>(
        ProjectionModel::load_file(spec.substr(11)));
  }
  if (spec.rfind("process:", 0) == 0 || spec.rfind("http://", 0) == 0) {
    return std::make_shared<ExternalEmbedder>(open_transport(spec));
  }
  fail(ErrorCode::kInvalidArgument, "unknown embedder spec \"" + spec + "\"");
}

}  // namespace hybridrag
