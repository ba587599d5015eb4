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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hybridrag {

using DocId = std::int64_t;
using ChunkId = std::int64_t;

struct Document {
  DocId doc_id = 0;
  std::string url;
  std::string host;  // always extract_host(url)
  std::string title;
  std::string body;  // non-empty
};

// A half-open byte range [char_start, char_end) of a document body.
struct Chunk {
  ChunkId chunk_id = 0;
  DocId doc_id = 0;
  std::string text;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
};

struct ChunkingConfig {
  std::size_t target_size = 1000;
  std::size_t overlap = 100;
  std::string sentence_delimiters = ".!?\n";

  // Throws Error(kInvalidArgument) unless 0 <= overlap < target_size.
  void validate() const;
  bool is_delimiter(char c) const;
};

// Lowercased authority of an absolute URL with userinfo and port removed.
// Throws Error(kParse) when the input has no scheme or an empty host.
std::string extract_host(std::string_view url);

// Reads a line-delimited JSON corpus: one object per line with string
// fields "url", "title" and "body". Blank lines are skipped but still count
// toward the reported line numbers.
std::vector<Document> ingest_corpus(const std::filesystem::path& path);
std::vector<Document> parse_corpus(std::istream& in);

// Splits a body into overlapping chunks that end right after a sentence
// delimiter where one is reachable. From the tentative cut at
// start + target_size the splitter searches backward up to target_size / 2
// bytes, then forward up to target_size / 2, then hard-cuts. Whitespace that
// directly follows the cut is kept in the ending chunk. The next chunk starts
// `overlap` bytes before the previous end (never at or before the previous
// start). Offsets are byte offsets; hard cuts and rewinds are snapped back to
// UTF-8 code point boundaries.
std::vector<Chunk> chunk_document(const Document& doc,
                                  const ChunkingConfig& cfg,
                                  ChunkId first_chunk_id = 0);

// Chunks every document, assigning dense global chunk ids in doc order.
std::vector<Chunk> chunk_corpus(std::span<const Document> docs,
                                const ChunkingConfig& cfg);

// Requires docs[i].doc_id == i for all i.
void check_dense_doc_ids(std::span<const Document> docs);

}  // namespace hybridrag
