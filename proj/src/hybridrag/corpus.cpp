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

#include "hybridrag/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>

#include <nlohmann/json.hpp>

#include "hybridrag/error.hpp"

namespace hybridrag {

namespace {

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_utf8_continuation(char c) {
  return (static_cast<unsigned char>(c) & 0xC0) == 0x80;
}

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string required_string(const nlohmann::json& record, const char* field,
                            std::size_t line_no) {
  auto it = record.find(field);
  if (it == record.end()) {
    fail(ErrorCode::kParse, "line " + std::to_string(line_no) +
                                ": missing field \"" + field + "\"");
  }
  if (!it->is_string()) {
    fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": field \"" +
                                field + "\" must be a string");
  }
  return it->get<std::string>();
}

}  // namespace

void ChunkingConfig::validate() const {
  if (target_size < 1) {
    fail(ErrorCode::kInvalidArgument, "chunk target size must be >= 1");
  }
  if (overlap >= target_size) {
    fail(ErrorCode::kInvalidArgument,
         "chunk overlap (" + std::to_string(overlap) +
             ") must be smaller than the target size (" +
             std::to_string(target_size) + ")");
  }
}

bool ChunkingConfig::is_delimiter(char c) const {
  return sentence_delimiters.find(c) != std::string::npos;
}

std::string extract_host(std::string_view url) {
  auto bad = [&](const char* why) -> std::string {
    fail(ErrorCode::kParse,
         "not an absolute URL (" + std::string(why) + "): " + std::string(url));
  };

  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos || scheme_end == 0) {
    return bad("missing scheme");
  }
  for (std::size_t i = 0; i < scheme_end; ++i) {
    const char c = url[i];
    const bool alpha = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    const bool ok = alpha || (i > 0 && ((c >= '0' && c <= '9') || c == '+' ||
                                        c == '-' || c == '.'));
    if (!ok) return bad("invalid scheme");
  }

  std::string_view authority = url.substr(scheme_end + 3);
  authority = authority.substr(0, authority.find_first_of("/?#"));
  if (const auto at = authority.rfind('@'); at != std::string_view::npos) {
    authority.remove_prefix(at + 1);
  }

  std::string_view host;
  if (!authority.empty() && authority.front() == '[') {
    const auto close = authority.find(']');
    if (close == std::string_view::npos) return bad("unterminated IPv6 host");
    host = authority.substr(0, close + 1);
  } else {
    host = authority.substr(0, authority.find(':'));
  }
  if (host.empty()) return bad("empty host");

  std::string out;
  out.reserve(host.size());
  for (const char c : host) {
    if (is_ascii_space(c)) return bad("whitespace in host");
    out.push_back(ascii_lower(c));
  }
  return out;
}

std::vector<Document> parse_corpus(std::istream& in) {
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), is_ascii_space)) continue;

    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      fail(ErrorCode::kParse,
           "line " + std::to_string(line_no) + ": invalid JSON: " + e.what());
    }
    if (!record.is_object()) {
      fail(ErrorCode::kParse,
           "line " + std::to_string(line_no) + ": record must be an object");
    }

    Document doc;
    doc.doc_id = static_cast<DocId>(docs.size());
    doc.url = required_string(record, "url", line_no);
    doc.title = required_string(record, "title", line_no);
    doc.body = required_string(record, "body", line_no);
    if (doc.body.empty()) {
      fail(ErrorCode::kParse,
           "line " + std::to_string(line_no) + ": field \"body\" is empty");
    }
    try {
      doc.host = extract_host(doc.url);
    } catch (const Error& e) {
      fail(ErrorCode::kParse,
           "line " + std::to_string(line_no) + ": " + e.what());
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<Document> ingest_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open corpus file: " + path.string());
  try {
    return parse_corpus(in);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) {
      fail(ErrorCode::kParse, path.string() + ": " + e.what());
    }
    throw;
  }
}

std::vector<Chunk> chunk_document(const Document& doc,
                                  const ChunkingConfig& cfg,
                                  ChunkId first_chunk_id) {
  cfg.validate();
  const std::string& body = doc.body;
  const std::size_t n = body.size();
  const std::size_t target = cfg.target_size;
  const std::size_t cap = target / 2;

  std::vector<Chunk> chunks;
  auto emit = [&](std::size_t begin, std::size_t end) {
    Chunk c;
    c.chunk_id = first_chunk_id + static_cast<ChunkId>(chunks.size());
    c.doc_id = doc.doc_id;
    c.char_start = begin;
    c.char_end = end;
    c.text = body.substr(begin, end - begin);
    chunks.push_back(std::move(c));
  };
  // A cut at position e means the chunk ends right after body[e - 1].
  auto ends_on_delimiter = [&](std::size_t e) {
    return cfg.is_delimiter(body[e - 1]);
  };

  std::size_t start = 0;
  while (start < n) {
    if (n - start <= target) {
      emit(start, n);
      break;
    }

    const std::size_t tentative = start + target;
    const std::size_t lowest = std::max(start + 1, tentative - cap);
    const std::size_t highest = std::min(n, tentative + cap);

    std::size_t cut = 0;
    for (std::size_t e = tentative; e >= lowest; --e) {
      if (ends_on_delimiter(e)) {
        cut = e;
        break;
      }
    }
    if (cut == 0) {
      for (std::size_t e = tentative + 1; e <= highest; ++e) {
        if (ends_on_delimiter(e)) {
          cut = e;
          break;
        }
      }
    }

    if (cut != 0) {
      while (cut < highest && is_ascii_space(body[cut])) ++cut;
    } else {
      cut = tentative;
      while (cut > start + 1 && is_utf8_continuation(body[cut])) --cut;
      while (cut < n && is_utf8_continuation(body[cut])) ++cut;
    }

    emit(start, cut);
    if (cut >= n) break;

    std::size_t next = cut > cfg.overlap ? cut - cfg.overlap : 0;
    next = std::max(next, start + 1);
    while (next > start + 1 && is_utf8_continuation(body[next])) --next;
    while (next < cut && is_utf8_continuation(body[next])) ++next;
    start = next;
  }
  return chunks;
}

std::vector<Chunk> chunk_corpus(std::span<const Document> docs,
                                const ChunkingConfig& cfg) {
  std::vector<Chunk> all;
  for (const auto& doc : docs) {
    auto chunks =
        chunk_document(doc, cfg, static_cast<ChunkId>(all.size()));
    std::move(chunks.begin(), chunks.end(), std::back_inserter(all));
  }
  return all;
}

void check_dense_doc_ids(std::span<const Document> docs) {
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (docs[i].doc_id != static_cast<DocId>(i)) {
      fail(ErrorCode::kInvalidArgument,
           "document ids must be dense and ordered; position " +
               std::to_string(i) + " holds doc_id " +
               std::to_string(docs[i].doc_id));
    }
  }
}

}  // namespace hybridrag
