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

#include "hybridrag/datasets.hpp"

#include <fstream>
#include <istream>

#include <nlohmann/json.hpp>

#include "hybridrag/corpus.hpp"
#include "hybridrag/error.hpp"

namespace hybridrag {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void line_error(std::size_t line_no, const std::string& what) {
  fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + what);
}

std::string string_field(const nlohmann::json& j, const char* name,
                         std::size_t line_no, bool required) {
  const auto it = j.find(name);
  if (it == j.end()) {
    if (required) line_error(line_no, std::string("missing field \"") + name + "\"");
    return {};
  }
  if (!it->is_string()) {
    line_error(line_no, std::string("field \"") + name + "\" must be a string");
  }
  return it->get<std::string>();
}

template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      line_error(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) line_error(line_no, "record must be a JSON object");
    fn(j, line_no);
  }
  if (in.bad()) fail(ErrorCode::kIo, "read error");
}

std::ifstream open_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

}  // namespace

const char* category_name(NegativeCategory c) {
  switch (c) {
    case NegativeCategory::kJailbreak: return "jailbreak";
    case NegativeCategory::kNsfw: return "nsfw";
    case NegativeCategory::kIrrelevant: return "irrelevant";
  }
  return "?";
}

std::optional<NegativeCategory> parse_category(std::string_view name) {
  for (const auto c : kAllNegativeCategories) {
    if (name == category_name(c)) return c;
  }
  return std::nullopt;
}

std::vector<GoldenExample> parse_golden(std::istream& in, char delimiter) {
  std::vector<GoldenExample> out;
  for_each_record(in, [&](const nlohmann::json& j, std::size_t line_no) {
    GoldenExample g;
    g.query = string_field(j, "query", line_no, true);
    if (trim(g.query).empty()) line_error(line_no, "field \"query\" is empty");
    const auto urls = string_field(j, "relevant_urls", line_no, true);
    std::size_t pos = 0;
    while (pos <= urls.size()) {
      auto next = urls.find(delimiter, pos);
      if (next == std::string::npos) next = urls.size();
      auto url = trim(std::string_view(urls).substr(pos, next - pos));
      if (!url.empty()) {
        try {
          extract_host(url);
        } catch (const Error& e) {
          line_error(line_no, "relevant url \"" + url + "\": " + e.what());
        }
        g.relevant_urls.push_back(std::move(url));
      }
      pos = next + 1;
    }
    if (g.relevant_urls.empty()) line_error(line_no, "field \"relevant_urls\" is empty");
    g.golden_answer = string_field(j, "answer", line_no, false);
    g.source_url = string_field(j, "source_url", line_no, false);
    out.push_back(std::move(g));
  });
  return out;
}

std::vector<GoldenExample> load_golden(const std::filesystem::path& path,
                                       char delimiter) {
  auto in = open_dataset(path);
  return parse_golden(in, delimiter);
}

std::vector<NegativeExample> parse_negative(std::istream& in) {
  std::vector<NegativeExample> out;
  for_each_record(in, [&](const nlohmann::json& j, std::size_t line_no) {
    NegativeExample n;
    n.query = string_field(j, "query", line_no, true);
    const auto cat = string_field(j, "category", line_no, true);
    const auto parsed = parse_category(cat);
    if (!parsed) line_error(line_no, "unknown category \"" + cat + "\"");
    n.category = *parsed;
    out.push_back(std::move(n));
  });
  return out;
}

std::vector<NegativeExample> load_negative(const std::filesystem::path& path) {
  auto in = open_dataset(path);
  return parse_negative(in);
}

}  // namespace hybridrag
