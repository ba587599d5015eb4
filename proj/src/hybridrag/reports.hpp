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

// Text renderings of command results: aligned tables for people and one
// JSON object per line ("records") for scripts. Both are deterministic.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybridrag/contrastive.hpp"
#include "hybridrag/evaluation.hpp"
#include "hybridrag/guardrail.hpp"
#include "hybridrag/judge.hpp"

namespace hybridrag {

enum class ReportFormat { kTable, kRecords };

std::optional<ReportFormat> parse_report_format(std::string_view name);

// Left-aligned columns separated by two spaces, trailing blanks trimmed.
std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows);

std::string fixed(double v, int decimals);

// Table form is one tab-separated line per hit: url, total and the three
// score terms to 6 decimals.
std::string format_search(std::span<const ScoredDocument> hits, ReportFormat fmt);
std::string format_eval(const EvalReport& r, ReportFormat fmt);
std::string format_sweep(const SweepReport& r, ReportFormat fmt);
std::string format_chunk_sizes(std::span<const ChunkSizeRow> rows, ReportFormat fmt);
std::string format_negatives(const NegativeSuiteResult& r, ReportFormat fmt);
std::string format_judge(const JudgeReport& r, ReportFormat fmt);
std::string format_guard(const GuardResult& r, const GuardConfig& cfg, ReportFormat fmt);
std::string format_training(const TrainResult& r, const PairCosines& cosines,
                            ReportFormat fmt);

}  // namespace hybridrag
