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

// hybridrag command-line tool. Subcommands map onto the C API; every flag
// is forwarded as a config setting, so flags override the config file and
// environment, which override built-in defaults.
//
// Exit status: 0 success, 1 data or runtime error, 2 usage error,
// 3 guard verdict "blocked".

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "hybridrag/hybridrag.h"

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBlocked = 3;

struct Failure {
  int exit_code;
  std::string message;
};

void check(hr_status s, const char* what, int exit_code = kExitData) {
  if (s != HR_OK) {
    throw Failure{exit_code, std::string(what) + ": " + hr_last_error()};
  }
}

class Config {
 public:
  Config() { check(hr_config_create(&cfg_), "config"); }
  ~Config() { hr_config_destroy(cfg_); }
  Config(const Config&) = delete;
  Config& operator=(const Config&) = delete;
  hr_config* get() const { return cfg_; }

 private:
  hr_config* cfg_ = nullptr;
};

class Engine {
 public:
  Engine(const hr_config* cfg, const char* dir) {
    check(hr_engine_open(cfg, dir, &engine_), "open index");
  }
  ~Engine() { hr_engine_destroy(engine_); }
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;
  const hr_engine* get() const { return engine_; }

 private:
  hr_engine* engine_ = nullptr;
};

// Takes ownership of an hr_string and writes it to stdout.
void print(hr_string* s) {
  std::fwrite(hr_string_data(s), 1, hr_string_size(s), stdout);
  hr_string_destroy(s);
}

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitData, std::string("cannot read ") + what + " " + path};
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// A flag whose value, when given, is forwarded to a config key.
struct Forward {
  CLI::Option* option;
  std::string key;
  std::string* value;
};

struct Command {
  CLI::App* app = nullptr;
  std::vector<Forward> forwards;
  std::vector<std::unique_ptr<std::string>> storage;

  CLI::Option* forward(const std::string& flag, const std::string& key,
                       const std::string& help) {
    storage.push_back(std::make_unique<std::string>());
    auto* opt = app->add_option(flag, *storage.back(), help);
    forwards.push_back({opt, key, storage.back().get()});
    return opt;
  }
};

void add_fusion_flags(Command& c) {
  c.forward("--strategy", "fusion.strategy", "bm25_only | dense_only | hybrid | hybrid_host");
  c.forward("--bm25-boost", "fusion.bm25_boost", "weight of the normalized BM25 term");
  c.forward("--host-boost", "fusion.host_boost", "weight of the host authority term");
  c.forward("--top-k", "fusion.top_k", "results per query");
  c.forward("--hosts", "hosts.file", "file of \"host weight\" lines");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid dense + BM25 + host-authority retrieval and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hr_version()));

  std::string config_path;
  std::string threads;
  std::string format_name = "table";
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--threads", threads, "worker threads (0 = all cores)");
  app.add_option("--format", format_name, "table | records")
      ->check(CLI::IsMember({"table", "records"}));

  std::map<std::string, Command> cmds;
  auto sub = [&](const std::string& name, const std::string& help) -> Command& {
    auto& c = cmds[name];
    c.app = app.add_subcommand(name, help);
    return c;
  };

  std::string corpus, out_dir, index_dir, query, golden, grid, sizes, negatives_file;
  std::string triples, dims_out, model_out, answer_file, prompt_file;

  auto& ingest = sub("ingest", "chunk, embed and index a corpus");
  ingest.app->add_option("--corpus", corpus, "line-delimited JSON corpus")->required();
  ingest.app->add_option("--out", out_dir, "index directory to write");
  ingest.forward("--chunk-size", "chunking.target_size", "target chunk size in bytes");
  ingest.forward("--chunk-overlap", "chunking.overlap", "chunk overlap in bytes");
  ingest.forward("--embedder", "embedder", "reference[:dims] | projection:<file> | process:<cmd> | http://...");

  auto& search = sub("search", "run one query");
  search.app->add_option("--index", index_dir, "index directory");
  search.app->add_option("--query", query, "query text")->required();
  add_fusion_flags(search);
  search.forward("--embedder", "embedder", "override the indexed embedder");

  auto& eval = sub("eval", "mean nDCG of a strategy over a golden set");
  eval.app->add_option("--index", index_dir, "index directory");
  eval.app->add_option("--golden", golden, "golden dataset")->required();
  add_fusion_flags(eval);
  eval.forward("--judge", "judge.spec", "mock | process:<cmd> | http://... (adds judged answers)");
  eval.forward("--product", "judge.product", "product named in the accuracy prompt");

  auto& tune = sub("tune", "grid sweep over bm25_boost x host_boost");
  tune.app->add_option("--index", index_dir, "index directory");
  tune.app->add_option("--golden", golden, "golden dataset")->required();
  tune.app->add_option("--grid", grid, "b1,b2,...xh1,h2,...")
      ->default_val("0.1,0.3,0.6,1.0x0.1,0.3,0.6,1.0");
  tune.forward("--top-k", "fusion.top_k", "results per query");
  tune.forward("--hosts", "hosts.file", "file of \"host weight\" lines");

  auto& sweep = sub("chunk-sweep", "dense-only nDCG per chunking config");
  sweep.app->add_option("--index", index_dir, "index directory");
  sweep.app->add_option("--golden", golden, "golden dataset")->required();
  sweep.app->add_option("--sizes", sizes, "target:overlap,...")
      ->default_val("1000:100,2000:500,5000:1000");
  sweep.forward("--top-k", "fusion.top_k", "results per query");

  auto& neg = sub("negatives", "null-response rates on negative queries");
  neg.app->add_option("--index", index_dir, "index directory");
  neg.app->add_option("--file", negatives_file, "negative dataset")->required();
  add_fusion_flags(neg);
  neg.forward("--threshold", "guard.threshold", "guard similarity threshold");
  neg.forward("--system-prompt-file", "guard.system_prompt_file", "system prompt text");
  neg.forward("--min-relevance", "answer.min_relevance", "extractive answer floor");

  auto& train = sub("train-projection", "fit a linear projection with InfoNCE");
  train.app->add_option("--triples", triples, "query/title/body records")->required();
  train.app->add_option("--dims-out", dims_out, "output dimensionality")->required();
  train.app->add_option("--out", model_out, "model file to write")->required();
  train.forward("--epochs", "train.epochs", "passes over the data");
  train.forward("--lr", "train.learning_rate", "gradient step size");
  train.forward("--seed", "train.seed", "initialization and shuffle seed");
  train.forward("--batch-size", "train.batch_size", "triples per batch");
  train.forward("--temperature", "train.temperature", "InfoNCE temperature");
  train.forward("--embedder", "embedder", "reference[:dims] input embedder");

  auto& guard = sub("guard", "check an answer against the system prompt");
  guard.app->add_option("--answer-file", answer_file, "generated answer")->required();
  guard.app->add_option("--system-prompt-file", prompt_file, "system prompt")->required();
  guard.app->add_option("--query", query, "user query to exclude")->default_val("");
  guard.forward("--threshold", "guard.threshold", "block at similarity >= threshold");
  guard.forward("--embedder", "embedder", "embedder spec");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    Config cfg;
    if (!config_path.empty()) check(hr_config_load_file(cfg.get(), config_path.c_str()), "config");
    check(hr_config_apply_env(cfg.get()), "environment");
    if (!threads.empty()) {
      check(hr_config_set(cfg.get(), "threads", threads.c_str()), "--threads", kExitUsage);
    }
    const hr_format fmt = format_name == "records" ? HR_FORMAT_RECORDS : HR_FORMAT_TABLE;

    std::string name;
    Command* cmd = nullptr;
    for (auto& [n, c] : cmds) {
      if (c.app->parsed()) {
        name = n;
        cmd = &c;
      }
    }
    for (const auto& f : cmd->forwards) {
      if (f.option->count() == 0) continue;
      check(hr_config_set(cfg.get(), f.key.c_str(), f.value->c_str()),
            f.option->get_name().c_str(), kExitUsage);
    }
    check(hr_config_validate(cfg.get()), "config", kExitUsage);
    const char* dir = index_dir.empty() ? nullptr : index_dir.c_str();
    hr_string* out = nullptr;

    if (name == "ingest") {
      hr_ingest_stats stats{};
      check(hr_ingest(cfg.get(), corpus.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(),
                      &stats),
            "ingest");
      std::printf("indexed %llu documents, %llu chunks, %llu vectors\n",
                  static_cast<unsigned long long>(stats.documents),
                  static_cast<unsigned long long>(stats.chunks),
                  static_cast<unsigned long long>(stats.vectors));
    } else if (name == "search") {
      Engine engine(cfg.get(), dir);
      hr_results* results = nullptr;
      check(hr_engine_search(engine.get(), cfg.get(), query.c_str(), &results), "search");
      const hr_status s = hr_results_render(results, fmt, &out);
      hr_results_destroy(results);
      check(s, "search");
      print(out);
    } else if (name == "eval") {
      Engine engine(cfg.get(), dir);
      check(hr_eval(engine.get(), cfg.get(), golden.c_str(), fmt, &out), "eval");
      print(out);
    } else if (name == "tune") {
      Engine engine(cfg.get(), dir);
      check(hr_tune(engine.get(), cfg.get(), golden.c_str(), grid.c_str(), fmt, &out), "tune");
      print(out);
    } else if (name == "chunk-sweep") {
      Engine engine(cfg.get(), dir);
      check(hr_chunk_sweep(engine.get(), cfg.get(), golden.c_str(), sizes.c_str(), fmt, &out),
            "chunk-sweep");
      print(out);
    } else if (name == "negatives") {
      Engine engine(cfg.get(), dir);
      check(hr_negatives(engine.get(), cfg.get(), negatives_file.c_str(), fmt, &out),
            "negatives");
      print(out);
    } else if (name == "train-projection") {
      unsigned long long d = 0;
      std::istringstream ds(dims_out);
      if (!(ds >> d) || !ds.eof() || d == 0) {
        throw Failure{kExitUsage, "--dims-out: expected a positive integer"};
      }
      check(hr_train_projection(cfg.get(), triples.c_str(), static_cast<size_t>(d),
                                model_out.c_str(), fmt, &out),
            "train-projection");
      print(out);
    } else if (name == "guard") {
      const auto answer = read_file(answer_file, "answer file");
      const auto prompt = read_file(prompt_file, "system prompt file");
      hr_verdict verdict = HR_VERDICT_PASS;
      check(hr_guard_check(cfg.get(), answer.c_str(), prompt.c_str(), query.c_str(), &verdict,
                           nullptr, fmt, &out),
            "guard");
      print(out);
      return verdict == HR_VERDICT_BLOCKED ? kExitBlocked : 0;
    }
    return 0;
  } catch (const Failure& f) {
    std::fprintf(stderr, "hybridrag: %s\n", f.message.c_str());
    return f.exit_code;
  }
}
