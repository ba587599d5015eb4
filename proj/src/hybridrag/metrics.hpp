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

// Ranking metrics over binary relevance.

#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hybridrag {

// Lowercases scheme and host and drops one trailing '/'. Path, query and
// fragment are otherwise left alone. Strings without "://" are returned
// unchanged apart from the trailing slash.
std::string normalize_url(std::string_view url);

// rels[i] = 1 iff retrieved[i] matches some relevant url after
// normalization. A relevant url is credited at most once, at its first
// (best) position, so duplicates in `retrieved` cannot inflate DCG.
std::vector<int> relevance_vector(std::span<const std::string> retrieved,
                                  std::span<const std::string> relevant);

// Number of distinct relevant urls after normalization.
std::size_t distinct_relevant(std::span<const std::string> relevant);

// sum_{i=1..len} (2^rel_i - 1) / log2(i + 1). Throws kInvalidArgument if
// len > k, k < 1 or a rel is outside {0, 1}.
double dcg_at_k(std::span<const int> rels, std::size_t k);

// DCG of rels over the DCG of min(num_relevant, k) leading ones. Throws
// kInvalidArgument when num_relevant == 0 (IDCG undefined) and on the same
// conditions as dcg_at_k.
double ndcg_at_k(std::span<const int> rels, std::size_t num_relevant, std::size_t k);

}  // namespace hybridrag
