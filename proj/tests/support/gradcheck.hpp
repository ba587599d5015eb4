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

// Central-difference check of the projection gradient.

#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "hybridrag/contrastive.hpp"
#include "support/generators.hpp"

namespace testsupport {

struct GradCheck {
  double max_relative_error = 0.0;
  double max_abs_gradient = 0.0;
};

// Entries whose analytic and numeric values are both below `floor` are
// compared against the floor instead of their own magnitude.
inline GradCheck finite_difference_check(std::span<const hybridrag::TrainTriple> batch,
                                         const hybridrag::ProjectionModel& model,
                                         double h = 1e-5, double floor = 1e-3) {
  const auto analytic = hybridrag::loss_gradient(batch, model);
  GradCheck out;
  auto probe = model;
  for (std::size_t i = 0; i < analytic.data.size(); ++i) {
    const double w = model.weights.data[i];
    probe.weights.data[i] = w + h;
    const double up = hybridrag::total_loss(batch, probe);
    probe.weights.data[i] = w - h;
    const double down = hybridrag::total_loss(batch, probe);
    probe.weights.data[i] = w;
    const double numeric = (up - down) / (2.0 * h);
    const double a = analytic.data[i];
    const double scale = std::max({std::abs(a), std::abs(numeric), floor});
    out.max_relative_error = std::max(out.max_relative_error, std::abs(a - numeric) / scale);
    out.max_abs_gradient = std::max(out.max_abs_gradient, std::abs(a));
  }
  return out;
}

inline std::vector<hybridrag::TrainTriple> random_triples(Rng& rng, std::size_t n,
                                                          std::size_t dims) {
  std::vector<hybridrag::TrainTriple> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({{random_unit(rng, dims)}, {random_unit(rng, dims)}, {random_unit(rng, dims)}});
  }
  return out;
}

}  // namespace testsupport
