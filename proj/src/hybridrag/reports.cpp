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

#include "hybridrag/reports.hpp"

#include <algorithm>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace hybridrag {

namespace {

using Record = nlohmann::ordered_json;

std::string join_lines(const std::vector<Record>& records) {
  std::string out;
  for (const auto& r : records) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

Record fusion_echo(Strategy s, const FusionConfig& cfg) {
  return {{"strategy", strategy_name(s)},
          {"bm25_boost", cfg.bm25_boost},
          {"host_boost", cfg.host_boost},
          {"k", cfg.top_k},
          {"bm25_normalization", normalization_name(cfg.bm25_normalization)}};
}

}  // namespace

std::optional<ReportFormat> parse_report_format(std::string_view name) {
  if (name == "table") return ReportFormat::kTable;
  if (name == "records") return ReportFormat::kRecords;
  return std::nullopt;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::string out;
  auto emit = [&](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) line += "  ";
      line += cells[c];
      if (c + 1 < cells.size() && c < width.size()) {
        line.append(width[c] - std::min(width[c], cells[c].size()), ' ');
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line;
    out += '\n';
  };
  emit(header);
  for (const auto& row : rows) emit(row);
  return out;
}

std::string format_search(std::span<const ScoredDocument> hits, ReportFormat fmt) {
  if (fmt == ReportFormat::kRecords) {
    std::vector<Record> recs;
    for (std::size_t i = 0; i < hits.size(); ++i) {
      const auto& h = hits[i];
      recs.push_back({{"rank", i + 1},
                      {"doc_id", h.doc_id},
                      {"url", h.url},
                      {"total", h.total},
                      {"cosine", h.cosine_term},
                      {"bm25", h.bm25_term},
                      {"host", h.host_term}});
    }
    return join_lines(recs);
  }
  std::string out;
  for (const auto& h : hits) {
    out += h.url + '\t' + fixed(h.total, 6) + '\t' + fixed(h.cosine_term, 6) + '\t' +
           fixed(h.bm25_term, 6) + '\t' + fixed(h.host_term, 6) + '\n';
  }
  return out;
}

std::string format_eval(const EvalReport& r, ReportFormat fmt) {
  if (fmt == ReportFormat::kRecords) {
    std::vector<Record> recs;
    for (std::size_t i = 0; i < r.per_query.size(); ++i) {
      const auto& q = r.per_query[i];
      recs.push_back({{"type", "query"},
                      {"index", i},
                      {"query", q.query},
                      {"ndcg", q.ndcg},
                      {"retrieved", q.retrieved_urls}});
    }
    auto summary = fusion_echo(r.strategy, r.fusion);
    summary["queries"] = r.per_query.size();
    summary["mean_ndcg"] = r.mean_ndcg;
    Record s{{"type", "summary"}};
    s.update(summary);
    recs.push_back(std::move(s));
    return join_lines(recs);
  }
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < r.per_query.size(); ++i) {
    const auto& q = r.per_query[i];
    rows.push_back({std::to_string(i + 1), fixed(q.ndcg, 4), q.query,
                    join(q.retrieved_urls, " ")});
  }
  std::string out = "strategy " + std::string(strategy_name(r.strategy)) +
                    "  bm25_boost " + fixed(r.fusion.bm25_boost, 3) + "  host_boost " +
                    fixed(r.fusion.host_boost, 3) + "  k " + std::to_string(r.fusion.top_k) +
                    "\n";
  out += render_table({"#", "ndcg", "query", "retrieved"}, rows);
  out += "mean_ndcg " + fixed(r.mean_ndcg, 6) + " over " +
         std::to_string(r.per_query.size()) + " queries\n";
  return out;
}

std::string format_sweep(const SweepReport& r, ReportFormat fmt) {
  if (fmt == ReportFormat::kRecords) {
    std::vector<Record> recs;
    for (std::size_t i = 0; i < r.cells.size(); ++i) {
      const auto& c = r.cells[i];
      recs.push_back({{"strategy", strategy_name(r.strategy)},
                      {"bm25_boost", c.bm25_boost},
                      {"host_boost", c.host_boost},
                      {"mean_ndcg", c.mean_ndcg},
                      {"best", i == r.best}});
    }
    return join_lines(recs);
  }
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    const auto& c = r.cells[i];
    rows.push_back({fixed(c.bm25_boost, 3), fixed(c.host_boost, 3), fixed(c.mean_ndcg, 6),
                    i == r.best ? "*" : ""});
  }
  return render_table({"bm25_boost", "host_boost", "mean_ndcg", "best"}, rows);
}

std::string format_chunk_sizes(std::span<const ChunkSizeRow> rows, ReportFormat fmt) {
  if (fmt == ReportFormat::kRecords) {
    std::vector<Record> recs;
    for (const auto& row : rows) {
      recs.push_back({{"strategy", "dense_only"},
                      {"chunk_size", row.chunking.target_size},
                      {"overlap", row.chunking.overlap},
                      {"chunks", row.num_chunks},
                      {"mean_ndcg", row.mean_ndcg}});
    }
    return join_lines(recs);
  }
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : rows) {
    cells.push_back({std::to_string(row.chunking.target_size),
                     std::to_string(row.chunking.overlap), std::to_string(row.num_chunks),
                     fixed(row.mean_ndcg, 6)});
  }
  return render_table({"chunk_size", "overlap", "chunks", "mean_ndcg"}, cells);
}

std::string format_negatives(const NegativeSuiteResult& r, ReportFormat fmt) {
  if (fmt == ReportFormat::kRecords) {
    std::vector<Record> recs;
    for (std::size_t i = 0; i < r.audits.size(); ++i) {
      const auto& a = r.audits[i];
      recs.push_back({{"type", "query"},
                      {"index", i},
                      {"category", category_name(a.example.category)},
                      {"query", a.example.query},
                      {"verdict", verdict_name(a.guard.verdict)},
                      {"similarity", a.guard.similarity},
                      {"answered", a.answered}});
    }
    for (const auto& row : r.report.rows) {
      Record rec{{"type", "category"},
                 {"category", category_name(row.category)},
                 {"total", row.total},
                 {"nulls", row.nulls}};
      rec["rate"] = row.rate ? Record(*row.rate) : Record(nullptr);
      recs.push_back(std::move(rec));
    }
    return join_lines(recs);
  }
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : r.report.rows) {
    cells.push_back({category_name(row.category), std::to_string(row.total),
                     std::to_string(row.nulls),
                     std::to_string(row.nulls) + "/" + std::to_string(row.total),
                     row.rate ? fixed(*row.rate, 4) : "n/a"});
  }
  return render_table({"category", "total", "nulls", "null_responses", "rate"}, cells);
}

std::string format_judge(const JudgeReport& r, ReportFormat fmt) {
  if (fmt == ReportFormat::kRecords) {
    std::vector<Record> recs;
    for (std::size_t i = 0; i < r.per_query.size(); ++i) {
      const auto& q = r.per_query[i];
      recs.push_back({{"type", "judged"},
                      {"index", i},
                      {"query", q.query},
                      {"groundedness", q.groundedness},
                      {"accuracy", q.accuracy}});
    }
    recs.push_back({{"type", "judge_summary"},
                    {"judge", r.judge_id},
                    {"mean_groundedness", r.mean_groundedness},
                    {"mean_accuracy", r.mean_accuracy}});
    return join_lines(recs);
  }
  std::vector<std::vector<std::string>> cells;
  for (std::size_t i = 0; i < r.per_query.size(); ++i) {
    const auto& q = r.per_query[i];
    cells.push_back({std::to_string(i + 1), fixed(q.groundedness, 1), fixed(q.accuracy, 1),
                     q.query});
  }
  std::string out = "judge " + r.judge_id + "\n";
  out += render_table({"#", "groundedness", "accuracy", "query"}, cells);
  out += "mean_groundedness " + fixed(r.mean_groundedness, 4) + "  mean_accuracy " +
         fixed(r.mean_accuracy, 4) + "\n";
  return out;
}

std::string format_guard(const GuardResult& r, const GuardConfig& cfg, ReportFormat fmt) {
  if (fmt == ReportFormat::kRecords) {
    Record rec{{"verdict", verdict_name(r.verdict)},
               {"similarity", r.similarity},
               {"threshold", cfg.threshold},
               {"embedder", r.embedder_id}};
    return rec.dump() + "\n";
  }
  return std::string(verdict_name(r.verdict)) + " similarity=" + fixed(r.similarity, 4) +
         " threshold=" + fixed(cfg.threshold, 4) + " embedder=" + r.embedder_id + "\n";
}

std::string format_training(const TrainResult& r, const PairCosines& cosines,
                            ReportFormat fmt) {
  if (fmt == ReportFormat::kRecords) {
    std::vector<Record> recs;
    for (std::size_t i = 0; i < r.epoch_loss.size(); ++i) {
      recs.push_back({{"type", "epoch"}, {"epoch", i + 1}, {"loss", r.epoch_loss[i]}});
    }
    recs.push_back({{"type", "summary"},
                    {"d_in", r.model.d_in()},
                    {"d_out", r.model.d_out()},
                    {"positive_cosine", cosines.positive},
                    {"negative_cosine", cosines.negative}});
    return join_lines(recs);
  }
  std::vector<std::vector<std::string>> cells;
  for (std::size_t i = 0; i < r.epoch_loss.size(); ++i) {
    cells.push_back({std::to_string(i + 1), fixed(r.epoch_loss[i], 6)});
  }
  std::string out = render_table({"epoch", "loss"}, cells);
  out += "positive_cosine " + fixed(cosines.positive, 4) + "  negative_cosine " +
         fixed(cosines.negative, 4) + "\n";
  return out;
}

}  // namespace hybridrag
