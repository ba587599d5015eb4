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

// Golden and negative query datasets (line-delimited JSON).

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hybridrag {

struct GoldenExample {
  std::string query;
  std::vector<std::string> relevant_urls;  // non-empty, absolute urls
  std::string golden_answer;
  std::string source_url;
};

enum class NegativeCategory { kJailbreak, kNsfw, kIrrelevant };

inline constexpr NegativeCategory kAllNegativeCategories[] = {
    NegativeCategory::kJailbreak, NegativeCategory::kNsfw,
    NegativeCategory::kIrrelevant};

const char* category_name(NegativeCategory c);
std::optional<NegativeCategory> parse_category(std::string_view name);

struct NegativeExample {
  std::string query;
  NegativeCategory category = NegativeCategory::kIrrelevant;
};

// Fields: query, relevant_urls (joined by `delimiter`), answer, source_url.
// "answer" and "source_url" may be absent. Errors carry the line number.
std::vector<GoldenExample> parse_golden(std::istream& in, char delimiter = ';');
std::vector<GoldenExample> load_golden(const std::filesystem::path& path,
                                       char delimiter = ';');

// Fields: query, category (jailbreak | nsfw | irrelevant).
std::vector<NegativeExample> parse_negative(std::istream& in);
std::vector<NegativeExample> load_negative(const std::filesystem::path& path);

}  // namespace hybridrag
