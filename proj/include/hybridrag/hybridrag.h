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

/* C interface to the hybridrag retrieval engine.
 *
 * Objects are opaque handles created by hr_*_create / hr_*_open and released
 * with the matching hr_*_destroy; destroy functions accept NULL. Every
 * fallible call returns an hr_status. On failure a one-line description is
 * available from hr_last_error() on the same thread until the next call.
 * Output parameters are written only on success. Strings returned through
 * hr_string are owned by the caller.
 *
 * Handles are safe to use from several threads for read-only calls
 * (searching, evaluation, getters); hr_config_set, hr_config_load_file and
 * hr_config_apply_env must not race with other use of the same config.
 */

#ifndef HYBRIDRAG_HYBRIDRAG_H_
#define HYBRIDRAG_HYBRIDRAG_H_

#include <stddef.h>
#include <stdint.h>

#if defined(HYBRIDRAG_BUILDING_LIBRARY)
#define HR_API __attribute__((visibility("default")))
#else
#define HR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hr_status {
  HR_OK = 0,
  HR_INVALID_ARGUMENT = 1,
  HR_PARSE = 2,
  HR_IO = 3,
  HR_NOT_FOUND = 4,
  HR_DIMENSION = 5,
  HR_NUMERIC = 6,
  HR_TRANSPORT = 7,
  HR_INTERNAL = 8
} hr_status;

typedef enum hr_format { HR_FORMAT_TABLE = 0, HR_FORMAT_RECORDS = 1 } hr_format;

typedef enum hr_strategy {
  HR_STRATEGY_BM25_ONLY = 0,
  HR_STRATEGY_DENSE_ONLY = 1,
  HR_STRATEGY_HYBRID = 2,
  HR_STRATEGY_HYBRID_HOST = 3
} hr_strategy;

typedef enum hr_verdict { HR_VERDICT_PASS = 0, HR_VERDICT_BLOCKED = 1 } hr_verdict;

typedef struct hr_config hr_config;
typedef struct hr_engine hr_engine;
typedef struct hr_results hr_results;
typedef struct hr_string hr_string;

HR_API const char* hr_version(void);
HR_API const char* hr_status_name(hr_status status);
HR_API const char* hr_last_error(void);

/* Strings. hr_string_data is NUL-terminated; size excludes the NUL. */
HR_API const char* hr_string_data(const hr_string* s);
HR_API size_t hr_string_size(const hr_string* s);
HR_API void hr_string_destroy(hr_string* s);

/* Configuration. Keys are the flat dotted names documented in the README
 * (e.g. "fusion.bm25_boost"); values are text. */
HR_API hr_status hr_config_create(hr_config** out);
HR_API void hr_config_destroy(hr_config* cfg);
HR_API hr_status hr_config_load_file(hr_config* cfg, const char* path);
HR_API hr_status hr_config_apply_env(hr_config* cfg);
HR_API hr_status hr_config_set(hr_config* cfg, const char* key, const char* value);
HR_API hr_status hr_config_get(const hr_config* cfg, const char* key, hr_string** out);
HR_API hr_status hr_config_validate(const hr_config* cfg);

/* Indexing. index_dir may be NULL to use the configured index_dir. */
typedef struct hr_ingest_stats {
  uint64_t documents;
  uint64_t chunks;
  uint64_t vectors;
} hr_ingest_stats;

HR_API hr_status hr_ingest(const hr_config* cfg, const char* corpus_path,
                           const char* index_dir, hr_ingest_stats* stats);

/* Opens a saved index. Unless the config sets an embedder explicitly, the
 * embedder recorded at ingest time is used. */
HR_API hr_status hr_engine_open(const hr_config* cfg, const char* index_dir,
                                hr_engine** out);
HR_API void hr_engine_destroy(hr_engine* engine);
HR_API uint64_t hr_engine_num_documents(const hr_engine* engine);

HR_API hr_status hr_strategy_parse(const char* name, hr_strategy* out);

/* Searches with the strategy, boosts, top_k and host table from cfg. */
typedef struct hr_scored_document {
  const char* url; /* valid while the results handle lives */
  int64_t doc_id;
  double total; /* == cosine + bm25 + host */
  double cosine;
  double bm25;
  double host;
} hr_scored_document;

HR_API hr_status hr_engine_search(const hr_engine* engine, const hr_config* cfg,
                                  const char* query, hr_results** out);
HR_API size_t hr_results_size(const hr_results* results);
HR_API hr_status hr_results_get(const hr_results* results, size_t index,
                                hr_scored_document* out);
HR_API hr_status hr_results_render(const hr_results* results, hr_format format,
                                   hr_string** out);
HR_API void hr_results_destroy(hr_results* results);

/* Reports. Each renders a table or a record stream into *out. */
HR_API hr_status hr_eval(const hr_engine* engine, const hr_config* cfg,
                         const char* golden_path, hr_format format, hr_string** out);
HR_API hr_status hr_tune(const hr_engine* engine, const hr_config* cfg,
                         const char* golden_path, const char* grid_spec,
                         hr_format format, hr_string** out);
/* Re-chunks the engine's documents for every "target:overlap" entry. */
HR_API hr_status hr_chunk_sweep(const hr_engine* engine, const hr_config* cfg,
                                const char* golden_path, const char* sizes_spec,
                                hr_format format, hr_string** out);
HR_API hr_status hr_negatives(const hr_engine* engine, const hr_config* cfg,
                              const char* negatives_path, hr_format format,
                              hr_string** out);

HR_API hr_status hr_ndcg_at_k(const int* rels, size_t n, size_t num_relevant,
                              size_t k, double* out);

/* Guard check with the configured threshold and embedder. audit may be NULL. */
HR_API hr_status hr_guard_check(const hr_config* cfg, const char* answer,
                                const char* system_prompt, const char* user_query,
                                hr_verdict* verdict, double* similarity,
                                hr_format format, hr_string** audit);

/* Trains a projection over the configured reference embedder and writes the
 * model file. report may be NULL. */
HR_API hr_status hr_train_projection(const hr_config* cfg, const char* triples_path,
                                     size_t dims_out, const char* model_path,
                                     hr_format format, hr_string** report);

HR_API hr_status hr_render_groundedness_prompt(const char* context,
                                               const char* response, hr_string** out);
HR_API hr_status hr_render_accuracy_prompt(const char* product, const char* question,
                                           const char* ground_truth,
                                           const char* model_answer, hr_string** out);
HR_API hr_status hr_parse_judge_score(const char* reply, double* out);

#ifdef __cplusplus
}
#endif

#endif /* HYBRIDRAG_HYBRIDRAG_H_ */
