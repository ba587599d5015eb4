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

#include "hybridrag/judge.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>

#include "hybridrag/error.hpp"
#include "hybridrag/sparse_index.hpp"

namespace hybridrag {

const std::string_view kGroundednessTemplate =
    "System: You are an impartial groundedness judge. You will be given a context "
    "and a response. Your task is to determine how grounded the response is in the "
    "given context. A response is considered grounded if it is supported by and "
    "does not contradict the given context.\n"
    "\n"
    "Rate the groundedness on a scale from 0 to 1 (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, "
    "0.6, 0.7, 0.8, 0.9, 1.0), where 0 is completely ungrounded and 1 is perfectly "
    "grounded.\n"
    "\n"
    "Context: ${context}\n"
    "\n"
    "Response: ${response}\n"
    "\n"
    "Groundedness Score:";

const std::string_view kAccuracyTemplate =
    "System: You will be given one Model_answer and a Groundtruth_answer for a "
    "question about ${product}. Your task is to rate the similarity of the two "
    "answers on one metric.\n"
    "\n"
    "Evaluation Criteria:\n"
    "Similarity (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0) - "
    "Similarity of overall text and similarity of each step or multiple steps also "
    "need to be considered.\n"
    "\n"
    "Question: ${question}\n"
    "\n"
    "Groundtruth_answer: ${ground_truth}\n"
    "\n"
    "Model_answer: ${model_answer}\n"
    "\n"
    "Evaluation Steps:\n"
    "1. Read the question carefully\n"
    "2. Do not modify the Groundtruth_answer and Model_answer\n"
    "3. Read the Groundtruth_answer and identify the steps and order\n"
    "4. Read the Model_answer and assess similarity to Groundtruth\n"
    "5. Assign similarity score (0.0 to 1.0)\n"
    "6. Reply with the Similarity score only";

namespace {

using Bindings = std::map<std::string_view, std::string_view>;

std::string substitute(std::string_view tmpl, const Bindings& values) {
  std::string out;
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const auto open = tmpl.find("${", pos);
    if (open == std::string_view::npos) break;
    const auto close = tmpl.find('}', open + 2);
    if (close == std::string_view::npos) break;
    const auto it = values.find(tmpl.substr(open + 2, close - open - 2));
    out.append(tmpl.substr(pos, open - pos));
    if (it == values.end()) {
      out.append(tmpl.substr(open, close + 1 - open));
    } else {
      out.append(it->second);
    }
    pos = close + 1;
  }
  out.append(tmpl.substr(pos));
  return out;
}

bool is_score_char(char c) { return (c >= '0' && c <= '9') || c == '.'; }

// Text between `start_marker` and the next `end_marker` (or the end).
std::string_view section(std::string_view prompt, std::string_view start_marker,
                         std::string_view end_marker) {
  const auto b = prompt.find(start_marker);
  if (b == std::string_view::npos) return {};
  const auto from = b + start_marker.size();
  const auto e = end_marker.empty() ? std::string_view::npos : prompt.find(end_marker, from);
  return prompt.substr(from, e == std::string_view::npos ? std::string_view::npos : e - from);
}

double overlap_score(std::string_view answer, std::string_view reference) {
  const auto terms = distinct_terms(tokenize(answer));
  if (terms.empty()) return 0.0;
  const auto ref = tokenize(reference);
  const std::set<std::string> ref_set(ref.begin(), ref.end());
  std::size_t hit = 0;
  for (const auto& t : terms) hit += ref_set.count(t);
  return static_cast<double>(hit) / static_cast<double>(terms.size());
}

std::string format_score(double s) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.1f", std::round(s * 10.0) / 10.0);
  return buf;
}

}  // namespace

std::string render_groundedness_prompt(std::string_view context,
                                       std::string_view response) {
  return substitute(kGroundednessTemplate,
                    {{"context", context}, {"response", response}});
}

std::string render_accuracy_prompt(std::string_view product,
                                   std::string_view question,
                                   std::string_view ground_truth,
                                   std::string_view model_answer) {
  return substitute(kAccuracyTemplate, {{"product", product},
                                        {"question", question},
                                        {"ground_truth", ground_truth},
                                        {"model_answer", model_answer}});
}

double parse_judge_score(std::string_view reply) {
  std::optional<double> last;
  std::size_t i = 0;
  while (i < reply.size()) {
    if (!is_score_char(reply[i])) {
      ++i;
      continue;
    }
    const std::size_t begin = i;
    while (i < reply.size() && is_score_char(reply[i])) ++i;
    std::string_view tok = reply.substr(begin, i - begin);
    std::size_t lead = 0;
    while (lead < tok.size() && tok[lead] == '.') ++lead;
    tok.remove_prefix(lead);
    while (!tok.empty() && tok.back() == '.') tok.remove_suffix(1);
    if (tok.empty()) continue;
    // A sign directly before the number makes it a different value.
    if (lead == 0 && begin > 0 && (reply[begin - 1] == '-' || reply[begin - 1] == '+')) {
      continue;
    }
    if (tok == "0" || tok == "1") {
      last = tok == "1" ? 1.0 : 0.0;
    } else if (tok.size() == 3 && tok[1] == '.' && tok[0] == '0' &&
               tok[2] >= '0' && tok[2] <= '9') {
      last = static_cast<double>(tok[2] - '0') / 10.0;
    } else if (tok == "1.0") {
      last = 1.0;
    }
  }
  if (!last) {
    fail(ErrorCode::kParse, "no score in judge reply \"" + std::string(reply) + "\"");
  }
  return *last;
}

std::vector<std::string> MockJudge::complete(std::span<const std::string> prompts) const {
  std::vector<std::string> out;
  out.reserve(prompts.size());
  for (const auto& p : prompts) {
    double s = 0.0;
    if (p.find("Groundedness Score:") != std::string::npos) {
      s = overlap_score(section(p, "\n\nResponse: ", "\n\nGroundedness Score:"),
                        section(p, "\n\nContext: ", "\n\nResponse: "));
    } else {
      s = overlap_score(section(p, "\n\nModel_answer: ", "\n\nEvaluation Steps:"),
                        section(p, "\n\nGroundtruth_answer: ", "\n\nModel_answer: "));
    }
    out.push_back("Score: " + format_score(s));
  }
  return out;
}

TransportJudge::TransportJudge(std::unique_ptr<LineTransport> transport)
    : transport_(std::move(transport)) {
  if (!transport_) fail(ErrorCode::kInvalidArgument, "judge needs a transport");
  const auto& hs = transport_->handshake();
  const auto it = hs.find("id");
  id_ = "external-judge:" + (it != hs.end() && !it->second.empty() ? it->second
                                                                   : transport_->endpoint());
}

std::vector<std::string> TransportJudge::complete(std::span<const std::string> prompts) const {
  auto replies = transport_->exchange(prompts);
  if (replies.size() != prompts.size()) {
    fail(ErrorCode::kTransport, "judge returned " + std::to_string(replies.size()) +
                                    " replies for " + std::to_string(prompts.size()) +
                                    " prompts");
  }
  return replies;
}

std::unique_ptr<Judge> make_judge(const std::string& spec) {
  if (spec == "mock") return std::make_unique<MockJudge>();
  return std::make_unique<TransportJudge>(open_transport(spec));
}

JudgeReport judge_answers(const SearchEngine& engine,
                          std::span<const GoldenExample> golden,
                          Strategy strategy, const FusionConfig& cfg,
                          const HostBoostTable& hosts, const Answerer& answerer,
                          const Judge& judge, std::string_view product) {
  if (golden.empty()) fail(ErrorCode::kInvalidArgument, "golden dataset is empty");
  JudgeReport report;
  report.judge_id = judge.identifier();
  std::vector<std::string> prompts;
  for (const auto& g : golden) {
    const auto hits = engine.search(g.query, strategy, cfg, hosts);
    const auto answer = answerer(g.query, hits);
    report.per_query.push_back({g.query, answer.text, 0.0, 0.0});
    prompts.push_back(render_groundedness_prompt(answer.context, answer.text));
    prompts.push_back(render_accuracy_prompt(product, g.query, g.golden_answer, answer.text));
  }
  const auto replies = judge.complete(prompts);
  if (replies.size() != prompts.size()) {
    fail(ErrorCode::kTransport, "judge reply count mismatch");
  }
  double g_sum = 0.0, a_sum = 0.0;
  for (std::size_t i = 0; i < report.per_query.size(); ++i) {
    auto& row = report.per_query[i];
    row.groundedness = parse_judge_score(replies[2 * i]);
    row.accuracy = parse_judge_score(replies[2 * i + 1]);
    g_sum += row.groundedness;
    a_sum += row.accuracy;
  }
  const auto n = static_cast<double>(report.per_query.size());
  report.mean_groundedness = g_sum / n;
  report.mean_accuracy = a_sum / n;
  return report;
}

}  // namespace hybridrag
