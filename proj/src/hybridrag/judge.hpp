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

// LLM-judge prompt templates, reply parsing, and judge backends.

#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybridrag/evaluation.hpp"
#include "hybridrag/transport.hpp"

namespace hybridrag {

// Templates use ${name} placeholders. Substitution is a single left-to-right
// pass, so placeholder-like text inside a substituted value is kept as is.
extern const std::string_view kGroundednessTemplate;
extern const std::string_view kAccuracyTemplate;

std::string render_groundedness_prompt(std::string_view context,
                                       std::string_view response);
std::string render_accuracy_prompt(std::string_view product,
                                   std::string_view question,
                                   std::string_view ground_truth,
                                   std::string_view model_answer);

// Scans the reply for maximal runs of digits and '.', strips leading and
// trailing dots from each, and accepts "0", "1", "0.d" or "1.0" not preceded
// by a sign. The last accepted token wins. Throws kParse when none is found.
double parse_judge_score(std::string_view reply);

class Judge {
 public:
  virtual ~Judge() = default;
  virtual const std::string& identifier() const = 0;
  virtual std::vector<std::string> complete(std::span<const std::string> prompts) const = 0;
};

// Offline stand-in for an LLM judge. It reads the sections back out of a
// rendered prompt and scores the fraction of the answer's distinct terms
// found in the reference text (context, or the ground-truth answer), rounded
// to one decimal.
class MockJudge final : public Judge {
 public:
  const std::string& identifier() const override { return id_; }
  std::vector<std::string> complete(std::span<const std::string> prompts) const override;

 private:
  std::string id_ = "mock-overlap";
};

// Judge served over the line transport; replies are one line per prompt.
class TransportJudge final : public Judge {
 public:
  explicit TransportJudge(std::unique_ptr<LineTransport> transport);

  const std::string& identifier() const override { return id_; }
  std::vector<std::string> complete(std::span<const std::string> prompts) const override;

 private:
  std::unique_ptr<LineTransport> transport_;
  std::string id_;
};

// "mock" or a transport spec.
std::unique_ptr<Judge> make_judge(const std::string& spec);

struct JudgedAnswer {
  std::string query;
  std::string answer;
  double groundedness = 0.0;
  double accuracy = 0.0;
};

struct JudgeReport {
  std::string judge_id;
  std::vector<JudgedAnswer> per_query;
  double mean_groundedness = 0.0;
  double mean_accuracy = 0.0;
};

// Retrieves, answers and judges every golden query. `product` fills the
// accuracy prompt's product slot.
JudgeReport judge_answers(const SearchEngine& engine,
                          std::span<const GoldenExample> golden,
                          Strategy strategy, const FusionConfig& cfg,
                          const HostBoostTable& hosts, const Answerer& answerer,
                          const Judge& judge, std::string_view product);

}  // namespace hybridrag
