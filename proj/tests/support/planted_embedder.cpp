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

#include "support/planted_embedder.hpp"

#include <cmath>

#include "hybridrag/error.hpp"

namespace testsupport {

PlantedEmbedder::PlantedEmbedder(std::size_t dims, std::string id)
    : dims_(dims), id_(std::move(id)) {}

void PlantedEmbedder::plant(const std::string& text, std::vector<double> values) {
  if (values.size() != dims_) {
    hybridrag::fail(hybridrag::ErrorCode::kDimensionMismatch, "planted vector has wrong dims");
  }
  table_[text] = hybridrag::normalized(std::move(values));
}

hybridrag::EmbeddingVector PlantedEmbedder::embed(std::string_view text) const {
  const auto it = table_.find(text);
  if (it == table_.end()) {
    hybridrag::fail(hybridrag::ErrorCode::kNotFound,
                    "no planted vector for \"" + std::string(text) + "\"");
  }
  return it->second;
}

std::vector<double> planted_vector(std::size_t dims, std::size_t axis, double c,
                                   std::size_t private_axis) {
  std::vector<double> v(dims, 0.0);
  v[axis] = c;
  v[private_axis] += std::sqrt(1.0 - c * c);
  return v;
}

}  // namespace testsupport
