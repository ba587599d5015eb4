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

// Straight-line reference implementations used to cross-check the library.
// They follow the textbook formulas with no caching, sorting tricks or
// shared helpers from the code under test.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

// Lowercased maximal runs of ASCII letters/digits or non-ASCII bytes.
inline std::vector<std::string> words(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (const char ch : text) {
    const unsigned char c = static_cast<unsigned char>(ch);
    const bool word = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
                      (c >= 'A' && c <= 'Z') || c >= 0x80;
    if (word) {
      cur += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : ch;
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// BM25 of one document, recomputing every corpus statistic from scratch.
inline double bm25(const std::vector<std::string>& doc_texts, std::size_t doc,
                   const std::string& query, double k1 = 1.2, double b = 0.75) {
  std::vector<std::vector<std::string>> toks;
  double total_len = 0.0;
  for (const auto& t : doc_texts) {
    toks.push_back(words(t));
    total_len += static_cast<double>(toks.back().size());
  }
  const double n = static_cast<double>(doc_texts.size());
  const double avgdl = total_len / n;
  const double dl = static_cast<double>(toks[doc].size());
  std::vector<std::string> seen;
  double score = 0.0;
  for (const auto& term : words(query)) {
    if (std::find(seen.begin(), seen.end(), term) != seen.end()) continue;
    seen.push_back(term);
    double df = 0.0;
    for (const auto& d : toks) {
      if (std::find(d.begin(), d.end(), term) != d.end()) df += 1.0;
    }
    double tf = 0.0;
    for (const auto& w : toks[doc]) tf += (w == term) ? 1.0 : 0.0;
    if (tf == 0.0) continue;
    const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    score += idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * dl / avgdl));
  }
  return score;
}

inline double dcg(const std::vector<int>& rels) {
  double s = 0.0;
  for (std::size_t i = 1; i <= rels.size(); ++i) {
    s += (std::pow(2.0, rels[i - 1]) - 1.0) / std::log2(static_cast<double>(i) + 1.0);
  }
  return s;
}

// IDCG@k by enumerating every ordered selection of k items from a pool of
// `num_relevant` relevant and `num_irrelevant` irrelevant items.
inline double brute_force_idcg(std::size_t num_relevant, std::size_t num_irrelevant,
                               std::size_t k) {
  std::vector<int> pool(num_relevant, 1);
  pool.resize(num_relevant + num_irrelevant, 0);
  const std::size_t take = std::min(k, pool.size());
  double best = 0.0;
  std::vector<std::size_t> pick;
  std::vector<bool> used(pool.size(), false);
  auto rec = [&](auto&& self) -> void {
    if (pick.size() == take) {
      std::vector<int> r;
      for (const auto i : pick) r.push_back(pool[i]);
      best = std::max(best, dcg(r));
      return;
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      pick.push_back(i);
      self(self);
      pick.pop_back();
      used[i] = false;
    }
  };
  rec(rec);
  return best;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline std::vector<double> unit(std::vector<double> v) {
  const double n = std::sqrt(dot(v, v));
  if (n > 0.0) {
    for (double& x : v) x /= n;
  }
  return v;
}

struct Fused {
  std::size_t doc;
  double total, cosine, bm25, host;
};

// Exhaustive hybrid scoring: every document, cosine maximized over all of
// its vectors, BM25 divided by the corpus-wide maximum for the query.
inline std::vector<Fused> exhaustive_fusion(
    const std::vector<std::string>& doc_texts,
    const std::vector<std::vector<std::vector<double>>>& doc_vectors,
    const std::vector<double>& host_weights, const std::string& query,
    const std::vector<double>& query_vec, double bm25_boost, double host_boost,
    std::size_t top_k) {
  std::vector<double> raw(doc_texts.size());
  double max_raw = 0.0;
  for (std::size_t d = 0; d < doc_texts.size(); ++d) {
    raw[d] = bm25(doc_texts, d, query);
    max_raw = std::max(max_raw, raw[d]);
  }
  std::vector<Fused> all;
  for (std::size_t d = 0; d < doc_texts.size(); ++d) {
    double best = -2.0;
    for (const auto& v : doc_vectors[d]) {
      best = std::max(best, std::clamp(dot(v, query_vec), -1.0, 1.0));
    }
    const double norm = max_raw > 0.0 ? raw[d] / max_raw : 0.0;
    Fused f{d, 0.0, best, bm25_boost * norm, host_boost * host_weights[d]};
    f.total = f.cosine + f.bm25 + f.host;
    all.push_back(f);
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const Fused& a, const Fused& b) { return a.total > b.total; });
  if (all.size() > top_k) all.resize(top_k);
  return all;
}

// Symmetric InfoNCE written directly from its definition: log of a sum of
// exponentials, no max shift.
inline double info_nce(const std::vector<std::vector<double>>& a,
                       const std::vector<std::vector<double>>& p, double t) {
  const std::size_t n = a.size();
  double rows = 0.0, cols = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double z = 0.0;
    for (std::size_t j = 0; j < n; ++j) z += std::exp(dot(a[i], p[j]) / t);
    rows += -std::log(std::exp(dot(a[i], p[i]) / t) / z);
  }
  for (std::size_t j = 0; j < n; ++j) {
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) z += std::exp(dot(a[i], p[j]) / t);
    cols += -std::log(std::exp(dot(a[j], p[j]) / t) / z);
  }
  return 0.5 * (rows / static_cast<double>(n) + cols / static_cast<double>(n));
}

// normalize(W v) with W given as rows.
inline std::vector<double> project(const std::vector<std::vector<double>>& w,
                                   const std::vector<double>& v) {
  std::vector<double> z;
  for (const auto& row : w) z.push_back(dot(row, v));
  return unit(z);
}

struct Triple {
  std::vector<double> q, t, b;
};

inline double total_loss(const std::vector<Triple>& batch,
                         const std::vector<std::vector<double>>& w, double temp) {
  std::vector<std::vector<double>> q, t, b;
  for (const auto& tr : batch) {
    q.push_back(project(w, tr.q));
    t.push_back(project(w, tr.t));
    b.push_back(project(w, tr.b));
  }
  return info_nce(q, t, temp) + info_nce(q, b, temp);
}

}  // namespace oracle
