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

// On-disk index directory layout (format version 1):
//
//   manifest.json    format name/version, counts, chunking and BM25 params,
//                    embedder id/dims/spec
//   documents.jsonl  one {"doc_id","url","host","title","body"} per line
//   chunks.bin       "HRCHUNK1" u32 version, u64 count, then per chunk
//                    i64 doc_id, u64 char_start, u64 char_end
//   sparse.bin       "HRSPARSE" u32 version, f64 k1, f64 b, u64 num_docs,
//                    f64 avg_doc_length, u64 num_terms, u32 doc_lengths[],
//                    then per term (sorted): string, u64 n, n x (i64, u32)
//   dense.bin        "HRDENSE1" u32 version, string embedder_id, u64 dims,
//                    u64 vectors, u64 body_chunks, u64 docs, then per vector
//                    i64 doc_id followed by dims x f64
//
// All integers and IEEE-754 doubles are little-endian; strings are a u64
// byte length followed by the bytes. Doubles are stored bit-exact, so a
// save/load round trip is lossless.

#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "hybridrag/engine.hpp"

namespace hybridrag {

struct IndexManifest {
  std::uint32_t format_version = 1;
  std::size_t num_documents = 0;
  std::size_t num_chunks = 0;
  std::size_t num_vectors = 0;
  ChunkingConfig chunking;
  BM25Params bm25;
  std::string embedder_id;
  std::size_t embedder_dims = 0;
  std::string embedder_spec;  // how to recreate the embedder
};

void save_index(const std::filesystem::path& dir, const SearchEngine& engine,
                const std::string& embedder_spec);

IndexManifest read_manifest(const std::filesystem::path& dir);

// Loads the index and binds it to `embedder`, which must match the stored
// embedder id.
SearchEngine load_index(const std::filesystem::path& dir,
                        std::shared_ptr<const Embedder> embedder);

}  // namespace hybridrag
