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

// Post-generation guard against system-prompt leakage: an answer whose
// embedding is too close to the system prompt is withheld.

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybridrag/evaluation.hpp"

namespace hybridrag {

struct GuardConfig {
  double threshold = 0.85;  // Blocked iff similarity >= threshold
  std::string embedder_id;  // when set, the guard embedder must match

  void validate() const;
};

enum class GuardVerdict { kPass, kBlocked };

const char* verdict_name(GuardVerdict v);

struct GuardResult {
  GuardVerdict verdict = GuardVerdict::kPass;
  double similarity = 0.0;
  std::string embedder_id;
};

// Removes every occurrence of `user_query` from the system prompt (left to
// right, non-overlapping; nothing when the query is empty), embeds both
// sides and compares by cosine, floored at 0. An empty answer passes with
// similarity 0.
// Throws kInvalidArgument on an empty system prompt.
GuardResult guard_check(std::string_view answer, std::string_view system_prompt,
                        std::string_view user_query, const GuardConfig& cfg,
                        const Embedder& embedder);

std::string remove_all(std::string_view text, std::string_view needle);

extern const std::string_view kDefaultSystemPrompt;

struct NegativePipeline {
  const SearchEngine* engine = nullptr;
  Strategy strategy = Strategy::kHybridHost;
  FusionConfig fusion;
  HostBoostTable hosts;
  std::string system_prompt{kDefaultSystemPrompt};
  Answerer answerer;
  GuardConfig guard;
  const Embedder* guard_embedder = nullptr;  // null: the engine's embedder
};

struct NegativeAudit {
  NegativeExample example;
  std::string answer;
  GuardResult guard;
  bool answered = false;  // Pass with a non-empty answer
};

struct NegativeSuiteResult {
  std::vector<NegativeAudit> audits;  // dataset order
  NullRateReport report;
};

NegativeSuiteResult run_negative_suite(const NegativePipeline& pipeline,
                                       std::span<const NegativeExample> negatives);

}  // namespace hybridrag
