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

#include "hybridrag/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "hybridrag/error.hpp"

namespace hybridrag {

std::string normalize_url(std::string_view url) {
  std::string out(url);
  const auto scheme_end = out.find("://");
  if (scheme_end != std::string::npos) {
    const auto host_begin = scheme_end + 3;
    auto host_end = out.find_first_of("/?#", host_begin);
    if (host_end == std::string::npos) host_end = out.size();
    for (std::size_t i = 0; i < host_end; ++i) {
      out[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[i])));
    }
  }
  if (!out.empty() && out.back() == '/') out.pop_back();
  return out;
}

std::vector<int> relevance_vector(std::span<const std::string> retrieved,
                                  std::span<const std::string> relevant) {
  std::set<std::string> pending;
  for (const auto& r : relevant) pending.insert(normalize_url(r));
  std::vector<int> rels;
  rels.reserve(retrieved.size());
  for (const auto& url : retrieved) {
    rels.push_back(pending.erase(normalize_url(url)) ? 1 : 0);
  }
  return rels;
}

std::size_t distinct_relevant(std::span<const std::string> relevant) {
  std::set<std::string> s;
  for (const auto& r : relevant) s.insert(normalize_url(r));
  return s.size();
}

double dcg_at_k(std::span<const int> rels, std::size_t k) {
  if (k < 1) fail(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (rels.size() > k) {
    fail(ErrorCode::kInvalidArgument, "relevance list has " +
                                          std::to_string(rels.size()) +
                                          " entries, more than k = " + std::to_string(k));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < rels.size(); ++i) {
    if (rels[i] != 0 && rels[i] != 1) {
      fail(ErrorCode::kInvalidArgument, "relevance must be 0 or 1");
    }
    const double gain = std::exp2(static_cast<double>(rels[i])) - 1.0;
    sum += gain / std::log2(static_cast<double>(i + 2));
  }
  return sum;
}

double ndcg_at_k(std::span<const int> rels, std::size_t num_relevant, std::size_t k) {
  if (num_relevant == 0) {
    fail(ErrorCode::kInvalidArgument, "nDCG is undefined with no relevant items");
  }
  const double dcg = dcg_at_k(rels, k);
  const std::vector<int> ideal(std::min(num_relevant, k), 1);
  const double idcg = dcg_at_k(ideal, k);
  return std::clamp(dcg / idcg, 0.0, 1.0);
}

}  // namespace hybridrag
