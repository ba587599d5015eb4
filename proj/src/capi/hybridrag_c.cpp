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

#include "hybridrag/hybridrag.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hybridrag/app_config.hpp"
#include "hybridrag/error.hpp"
#include "hybridrag/evaluation.hpp"
#include "hybridrag/index_store.hpp"
#include "hybridrag/judge.hpp"
#include "hybridrag/metrics.hpp"
#include "hybridrag/reports.hpp"

struct hr_config {
  hybridrag::AppConfig cfg;
};

struct hr_engine {
  std::unique_ptr<hybridrag::SearchEngine> engine;
};

struct hr_results {
  std::vector<hybridrag::ScoredDocument> hits;
};

struct hr_string {
  std::string value;
};

namespace {

using namespace hybridrag;

thread_local std::string t_last_error;

hr_status to_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::kInvalidArgument: return HR_INVALID_ARGUMENT;
    case ErrorCode::kParse: return HR_PARSE;
    case ErrorCode::kIo: return HR_IO;
    case ErrorCode::kNotFound: return HR_NOT_FOUND;
    case ErrorCode::kDimensionMismatch: return HR_DIMENSION;
    case ErrorCode::kNumeric: return HR_NUMERIC;
    case ErrorCode::kTransport: return HR_TRANSPORT;
  }
  return HR_INTERNAL;
}

// Runs fn, translating exceptions into a status plus hr_last_error text.
template <typename Fn>
hr_status guarded(Fn&& fn) noexcept {
  t_last_error.clear();
  try {
    fn();
    return HR_OK;
  } catch (const Error& e) {
    t_last_error = e.what();
    return to_status(e.code());
  } catch (const nlohmann::json::exception& e) {
    t_last_error = e.what();
    return HR_PARSE;
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return HR_INTERNAL;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return HR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return HR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) fail(ErrorCode::kInvalidArgument, std::string(what) + " must not be NULL");
}

ReportFormat to_format(hr_format f) {
  switch (f) {
    case HR_FORMAT_TABLE: return ReportFormat::kTable;
    case HR_FORMAT_RECORDS: return ReportFormat::kRecords;
  }
  fail(ErrorCode::kInvalidArgument, "unknown report format");
}

hr_string* make_string(std::string s) { return new hr_string{std::move(s)}; }

void emit(hr_string** out, std::string s) {
  require(out, "output string");
  *out = make_string(std::move(s));
}

const AppConfig& config_of(const hr_config* cfg) {
  require(cfg, "config");
  return cfg->cfg;
}

const SearchEngine& engine_of(const hr_engine* e) {
  require(e, "engine");
  return *e->engine;
}

}  // namespace

extern "C" {

const char* hr_version(void) { return "1.0.0"; }

const char* hr_status_name(hr_status status) {
  switch (status) {
    case HR_OK: return "ok";
    case HR_INVALID_ARGUMENT: return "invalid_argument";
    case HR_PARSE: return "parse_error";
    case HR_IO: return "io_error";
    case HR_NOT_FOUND: return "not_found";
    case HR_DIMENSION: return "dimension_mismatch";
    case HR_NUMERIC: return "numeric_error";
    case HR_TRANSPORT: return "transport_error";
    case HR_INTERNAL: return "internal_error";
  }
  return "unknown_status";
}

const char* hr_last_error(void) { return t_last_error.c_str(); }

const char* hr_string_data(const hr_string* s) { return s ? s->value.c_str() : ""; }
size_t hr_string_size(const hr_string* s) { return s ? s->value.size() : 0; }
void hr_string_destroy(hr_string* s) { delete s; }

hr_status hr_config_create(hr_config** out) {
  return guarded([&] {
    require(out, "output config");
    *out = new hr_config;
  });
}

void hr_config_destroy(hr_config* cfg) { delete cfg; }

hr_status hr_config_load_file(hr_config* cfg, const char* path) {
  return guarded([&] {
    require(cfg, "config");
    require(path, "path");
    AppConfig next = cfg->cfg;
    next.load_file(path);
    cfg->cfg = std::move(next);
  });
}

hr_status hr_config_apply_env(hr_config* cfg) {
  return guarded([&] {
    require(cfg, "config");
    AppConfig next = cfg->cfg;
    next.apply_env();
    cfg->cfg = std::move(next);
  });
}

hr_status hr_config_set(hr_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg, "config");
    require(key, "key");
    require(value, "value");
    cfg->cfg.set(key, value);
  });
}

hr_status hr_config_get(const hr_config* cfg, const char* key, hr_string** out) {
  return guarded([&] {
    require(key, "key");
    emit(out, config_of(cfg).get(key));
  });
}

hr_status hr_config_validate(const hr_config* cfg) {
  return guarded([&] { config_of(cfg).validate(); });
}

hr_status hr_ingest(const hr_config* cfg, const char* corpus_path, const char* index_dir,
                    hr_ingest_stats* stats) {
  return guarded([&] {
    const auto& c = config_of(cfg);
    require(corpus_path, "corpus path");
    c.validate();
    auto docs = ingest_corpus(corpus_path);
    auto embedder = make_embedder(c.embedder);
    const auto engine =
        SearchEngine::build(std::move(docs), c.chunking, c.bm25, embedder, c.threads);
    save_index(index_dir ? std::string(index_dir) : c.index_dir, engine, c.embedder);
    if (stats) {
      stats->documents = engine.docs().size();
      stats->chunks = engine.chunks().size();
      stats->vectors = engine.dense().size();
    }
  });
}

hr_status hr_engine_open(const hr_config* cfg, const char* index_dir, hr_engine** out) {
  return guarded([&] {
    const auto& c = config_of(cfg);
    require(out, "output engine");
    const std::string dir = index_dir ? std::string(index_dir) : c.index_dir;
    const auto manifest = read_manifest(dir);
    std::string spec = c.embedder;
    if (!c.embedder_explicit && !manifest.embedder_spec.empty()) spec = manifest.embedder_spec;
    auto engine = std::make_unique<SearchEngine>(load_index(dir, make_embedder(spec)));
    *out = new hr_engine{std::move(engine)};
  });
}

void hr_engine_destroy(hr_engine* engine) { delete engine; }

uint64_t hr_engine_num_documents(const hr_engine* engine) {
  return engine ? engine->engine->docs().size() : 0;
}

hr_status hr_strategy_parse(const char* name, hr_strategy* out) {
  return guarded([&] {
    require(name, "name");
    require(out, "output strategy");
    const auto s = parse_strategy(name);
    if (!s) fail(ErrorCode::kInvalidArgument, std::string("unknown strategy \"") + name + "\"");
    *out = static_cast<hr_strategy>(*s);
  });
}

hr_status hr_engine_search(const hr_engine* engine, const hr_config* cfg, const char* query,
                           hr_results** out) {
  return guarded([&] {
    const auto& e = engine_of(engine);
    const auto& c = config_of(cfg);
    require(query, "query");
    require(out, "output results");
    c.fusion.validate();
    auto hits = e.search(query, c.strategy, c.fusion, c.host_table());
    *out = new hr_results{std::move(hits)};
  });
}

size_t hr_results_size(const hr_results* results) {
  return results ? results->hits.size() : 0;
}

hr_status hr_results_get(const hr_results* results, size_t index, hr_scored_document* out) {
  return guarded([&] {
    require(results, "results");
    require(out, "output document");
    if (index >= results->hits.size()) {
      fail(ErrorCode::kInvalidArgument, "result index out of range");
    }
    const auto& h = results->hits[index];
    *out = {h.url.c_str(), h.doc_id, h.total, h.cosine_term, h.bm25_term, h.host_term};
  });
}

hr_status hr_results_render(const hr_results* results, hr_format format, hr_string** out) {
  return guarded([&] {
    require(results, "results");
    emit(out, format_search(results->hits, to_format(format)));
  });
}

void hr_results_destroy(hr_results* results) { delete results; }

hr_status hr_eval(const hr_engine* engine, const hr_config* cfg, const char* golden_path,
                  hr_format format, hr_string** out) {
  return guarded([&] {
    const auto& e = engine_of(engine);
    const auto& c = config_of(cfg);
    require(golden_path, "golden path");
    const auto fmt = to_format(format);
    const auto golden = load_golden(golden_path, c.golden_delimiter);
    const auto hosts = c.host_table();
    const auto report = evaluate_strategy(e, golden, c.strategy, c.fusion, hosts, c.threads);
    std::string text = format_eval(report, fmt);
    if (!c.judge.empty()) {
      const auto judge = make_judge(c.judge);
      const auto judged =
          judge_answers(e, golden, c.strategy, c.fusion, hosts,
                        extractive_answerer(e, c.answer_min_relevance), *judge, c.judge_product);
      text += format_judge(judged, fmt);
    }
    emit(out, std::move(text));
  });
}

hr_status hr_tune(const hr_engine* engine, const hr_config* cfg, const char* golden_path,
                  const char* grid_spec, hr_format format, hr_string** out) {
  return guarded([&] {
    const auto& e = engine_of(engine);
    const auto& c = config_of(cfg);
    require(golden_path, "golden path");
    require(grid_spec, "grid spec");
    const auto fmt = to_format(format);
    const auto grid = parse_grid(grid_spec);
    const auto golden = load_golden(golden_path, c.golden_delimiter);
    const auto report = sweep_boosts(e, golden, grid, c.fusion, c.host_table(), c.threads);
    emit(out, format_sweep(report, fmt));
  });
}

hr_status hr_chunk_sweep(const hr_engine* engine, const hr_config* cfg,
                         const char* golden_path, const char* sizes_spec, hr_format format,
                         hr_string** out) {
  return guarded([&] {
    const auto& e = engine_of(engine);
    const auto& c = config_of(cfg);
    require(golden_path, "golden path");
    require(sizes_spec, "sizes spec");
    const auto fmt = to_format(format);
    const auto configs = parse_chunk_sizes(sizes_spec, c.chunking.sentence_delimiters);
    const auto golden = load_golden(golden_path, c.golden_delimiter);
    const auto rows = chunk_size_experiment(e.docs(), golden, configs, e.embedder_ptr(),
                                            e.sparse().params(), c.fusion, c.threads);
    emit(out, format_chunk_sizes(rows, fmt));
  });
}

hr_status hr_negatives(const hr_engine* engine, const hr_config* cfg,
                       const char* negatives_path, hr_format format, hr_string** out) {
  return guarded([&] {
    const auto& e = engine_of(engine);
    const auto& c = config_of(cfg);
    require(negatives_path, "negatives path");
    const auto fmt = to_format(format);
    const auto negatives = load_negative(negatives_path);
    NegativePipeline p;
    p.engine = &e;
    p.strategy = c.strategy;
    p.fusion = c.fusion;
    p.hosts = c.host_table();
    p.system_prompt = c.system_prompt();
    p.answerer = extractive_answerer(e, c.answer_min_relevance);
    p.guard = c.guard;
    emit(out, format_negatives(run_negative_suite(p, negatives), fmt));
  });
}

hr_status hr_ndcg_at_k(const int* rels, size_t n, size_t num_relevant, size_t k,
                       double* out) {
  return guarded([&] {
    if (n > 0) require(rels, "rels");
    require(out, "output value");
    *out = ndcg_at_k(std::span<const int>(rels, n), num_relevant, k);
  });
}

hr_status hr_guard_check(const hr_config* cfg, const char* answer, const char* system_prompt,
                         const char* user_query, hr_verdict* verdict, double* similarity,
                         hr_format format, hr_string** audit) {
  return guarded([&] {
    const auto& c = config_of(cfg);
    require(answer, "answer");
    require(system_prompt, "system prompt");
    const auto fmt = to_format(format);
    const auto embedder = make_embedder(c.embedder);
    const auto r = guard_check(answer, system_prompt, user_query ? user_query : "", c.guard,
                               *embedder);
    std::string text = format_guard(r, c.guard, fmt);
    if (verdict) *verdict = r.verdict == GuardVerdict::kBlocked ? HR_VERDICT_BLOCKED
                                                                : HR_VERDICT_PASS;
    if (similarity) *similarity = r.similarity;
    if (audit) *audit = make_string(std::move(text));
  });
}

hr_status hr_train_projection(const hr_config* cfg, const char* triples_path,
                              size_t dims_out, const char* model_path, hr_format format,
                              hr_string** report) {
  return guarded([&] {
    const auto& c = config_of(cfg);
    require(triples_path, "triples path");
    require(model_path, "model path");
    const auto fmt = to_format(format);
    const auto base = make_embedder(c.embedder);
    if (!dynamic_cast<const ReferenceEmbedder*>(base.get())) {
      fail(ErrorCode::kInvalidArgument,
           "projection training needs a reference embedder, got " + base->identifier());
    }
    const auto texts = load_triple_texts(triples_path);
    const auto triples = embed_triples(texts, *base);
    const auto result = train_projection(triples, c.train, dims_out);
    result.model.save_file(model_path);
    std::string text = format_training(result, pair_cosines(triples, result.model), fmt);
    if (report) *report = make_string(std::move(text));
  });
}

hr_status hr_render_groundedness_prompt(const char* context, const char* response,
                                        hr_string** out) {
  return guarded([&] {
    require(context, "context");
    require(response, "response");
    emit(out, render_groundedness_prompt(context, response));
  });
}

hr_status hr_render_accuracy_prompt(const char* product, const char* question,
                                    const char* ground_truth, const char* model_answer,
                                    hr_string** out) {
  return guarded([&] {
    require(product, "product");
    require(question, "question");
    require(ground_truth, "ground truth");
    require(model_answer, "model answer");
    emit(out, render_accuracy_prompt(product, question, ground_truth, model_answer));
  });
}

hr_status hr_parse_judge_score(const char* reply, double* out) {
  return guarded([&] {
    require(reply, "reply");
    require(out, "output value");
    *out = parse_judge_score(reply);
  });
}

}  // extern "C"
