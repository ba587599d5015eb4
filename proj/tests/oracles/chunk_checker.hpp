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

// Checks a document's chunks against the chunking contract. Returns an
// empty string when every property holds, otherwise the first violation.

#pragma once

#include <string>
#include <vector>

#include "hybridrag/corpus.hpp"

namespace oracle {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline std::string check_chunks(const std::string& body,
                                const std::vector<hybridrag::Chunk>& chunks,
                                const hybridrag::ChunkingConfig& cfg) {
  auto delim = [&](char c) { return cfg.sentence_delimiters.find(c) != std::string::npos; };
  if (chunks.empty()) return "no chunks";
  const std::size_t cap = cfg.target_size / 2;

  std::string rebuilt;
  std::vector<bool> covered(body.size(), false);
  for (std::size_t k = 0; k < chunks.size(); ++k) {
    const auto& c = chunks[k];
    const std::string where = "chunk " + std::to_string(k) + ": ";
    if (!(c.char_start < c.char_end && c.char_end <= body.size())) return where + "bad range";
    if (c.text != body.substr(c.char_start, c.char_end - c.char_start)) {
      return where + "text differs from body slice";
    }
    // Lengths are in bytes. A cut never splits a UTF-8 code point, so the
    // only allowed overrun is the tail of the code point straddling the bound.
    if (const std::size_t bound = c.char_start + cfg.target_size + cap; c.char_end > bound) {
      if (c.char_end - bound > 3) return where + "too long";
      for (std::size_t i = bound; i < c.char_end; ++i) {
        if ((static_cast<unsigned char>(body[i]) & 0xC0) != 0x80) return where + "too long";
      }
    }
    for (std::size_t i = c.char_start; i < c.char_end; ++i) covered[i] = true;

    if (k == 0) {
      if (c.char_start != 0) return where + "does not start at 0";
      rebuilt = c.text;
    } else {
      const auto& prev = chunks[k - 1];
      if (c.char_start <= prev.char_start) return where + "start not increasing";
      if (c.char_start > prev.char_end) return where + "gap after previous chunk";
      rebuilt += c.text.substr(prev.char_end - c.char_start);
    }

    const bool last = k + 1 == chunks.size();
    if (last) {
      if (c.char_end != body.size()) return where + "final chunk does not reach the end";
      continue;
    }
    // Delimiter alignment: a delimiter inside the trailing whitespace run or
    // right before it, or else no delimiter near the tentative cut.
    std::size_t e = c.char_end;
    bool aligned = false;
    while (e > c.char_start && is_space(body[e - 1])) {
      if (delim(body[e - 1])) aligned = true;
      --e;
    }
    if (e > c.char_start && delim(body[e - 1])) aligned = true;
    if (!aligned) {
      const std::size_t t = c.char_start + cfg.target_size;
      for (std::size_t p = t - cap + 1; p < t + cap && p < body.size(); ++p) {
        if (delim(body[p])) {
          return where + "hard cut although a delimiter sits at byte " + std::to_string(p);
        }
      }
    }
  }
  if (rebuilt != body) return "reconstruction differs from body";
  for (std::size_t i = 0; i < covered.size(); ++i) {
    if (!covered[i]) return "byte " + std::to_string(i) + " not covered";
  }
  return {};
}

}  // namespace oracle
