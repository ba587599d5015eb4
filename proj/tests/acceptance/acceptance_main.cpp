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

// Acceptance run: one PASS/FAIL line per criterion, each with its time
// budget. Exits non-zero if anything fails.
//
//   acceptance --cli <path to hybridrag> --data <tests/data>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hybridrag/contrastive.hpp"
#include "hybridrag/corpus.hpp"
#include "hybridrag/engine.hpp"
#include "hybridrag/error.hpp"
#include "hybridrag/evaluation.hpp"
#include "hybridrag/guardrail.hpp"
#include "hybridrag/judge.hpp"
#include "hybridrag/metrics.hpp"
#include "hybridrag/sparse_index.hpp"
#include "oracles/chunk_checker.hpp"
#include "oracles/oracles.hpp"
#include "support/docs.hpp"
#include "support/generators.hpp"
#include "support/gradcheck.hpp"
#include "support/synthetic.hpp"

namespace {

using namespace hybridrag;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome ndcg_criterion() {
  Outcome o;
  auto near = [&](double got, double want, const std::string& what) {
    o.require(std::abs(got - want) <= 1e-9, what + " = " + fmt("%.12f", got));
  };
  near(dcg_at_k(std::vector<int>{1, 0, 0}, 3), 1.0, "dcg[1,0,0]");
  near(dcg_at_k(std::vector<int>{0, 1, 0}, 3), 1.0 / std::log2(3.0), "dcg[0,1,0]");
  near(dcg_at_k(std::vector<int>{0, 0, 0}, 3), 0.0, "dcg[0,0,0]");
  near(ndcg_at_k(std::vector<int>{1, 0, 0}, 1, 3), 1.0, "ndcg[1,0,0]");
  near(ndcg_at_k(std::vector<int>{0, 0, 1}, 1, 3), 0.5, "ndcg[0,0,1]");
  near(ndcg_at_k(std::vector<int>{1, 1, 0}, 2, 3), 1.0, "ndcg[1,1,0]");

  testsupport::Rng rng(1001);
  for (int iter = 0; iter < 1000 && o.pass; ++iter) {
    const auto k = static_cast<std::size_t>(rng.range(1, 5));
    const auto relevant = static_cast<std::size_t>(rng.range(1, 6));
    const auto len = static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(k)));
    std::vector<int> rels;
    std::size_t ones = 0;
    for (std::size_t i = 0; i < len; ++i) {
      const int r = (ones < relevant && rng.chance(0.5)) ? 1 : 0;
      ones += static_cast<std::size_t>(r);
      rels.push_back(r);
    }
    const double v = ndcg_at_k(rels, relevant, k);
    const double want = oracle::dcg(rels) / oracle::brute_force_idcg(relevant, k, k);
    o.require(std::abs(v - want) <= 1e-9 && v >= 0.0 && v <= 1.0,
              "property case " + std::to_string(iter));
    // Moving a relevant hit ahead of an irrelevant one never lowers the score.
    for (std::size_t i = 0; i < rels.size(); ++i) {
      for (std::size_t j = i + 1; j < rels.size(); ++j) {
        if (rels[i] == 0 && rels[j] == 1) {
          auto better = rels;
          std::swap(better[i], better[j]);
          o.require(ndcg_at_k(better, relevant, k) >= v,
                    "permutation monotonicity, case " + std::to_string(iter));
        }
      }
    }
  }
  if (o.pass) o.detail = "6 worked cases, 1000 property cases";
  return o;
}

Outcome bm25_criterion() {
  Outcome o;
  const auto docs = testsupport::make_docs({"cat sat", "dog ran fast"});
  const auto index = SparseIndex::build(docs);
  const std::vector<std::string> cat = {"cat"};
  const double got = index.score(cat, 0);
  const double closed_form = std::log(2.0) * 2.2 / 2.02;
  o.require(std::abs(got - closed_form) <= 1e-6, "worked example " + fmt("%.9f", got));
  o.require(std::abs(got - 0.7549) < 5e-5, "worked example rounds to " + fmt("%.4f", got));

  testsupport::Rng rng(2002);
  std::size_t checked = 0;
  for (int iter = 0; iter < 100 && o.pass; ++iter) {
    const auto vocab = testsupport::random_vocabulary(rng, static_cast<std::size_t>(rng.range(5, 60)));
    const auto n = static_cast<std::size_t>(rng.range(1, 50));
    const auto corpus = testsupport::random_corpus(rng, n, vocab, 30);
    BM25Params p;
    p.k1 = rng.uniform(0.0, 3.0);
    p.b = rng.uniform(0.0, 1.0);
    const auto idx = SparseIndex::build(corpus, p);
    std::vector<std::string> texts;
    for (const auto& d : corpus) texts.push_back(d.title + " " + d.body);
    for (int q = 0; q < 3; ++q) {
      const auto query = testsupport::random_text(rng, vocab, static_cast<std::size_t>(rng.range(1, 4)));
      const auto terms = tokenize(query);
      for (std::size_t d = 0; d < n; ++d) {
        const double want = oracle::bm25(texts, d, query, p.k1, p.b);
        const double have = idx.score(terms, static_cast<DocId>(d));
        o.require(std::abs(have - want) <= 1e-9 * std::max(1.0, std::abs(want)),
                  "corpus " + std::to_string(iter) + " doc " + std::to_string(d));
        ++checked;
      }
    }
  }
  if (o.pass) o.detail = "score " + fmt("%.6f", got) + ", " + std::to_string(checked) + " brute-force scores";
  return o;
}

Outcome fusion_criterion() {
  Outcome o;
  testsupport::Rng rng(3003);
  for (int iter = 0; iter < 100 && o.pass; ++iter) {
    const auto vocab = testsupport::random_vocabulary(rng, 30);
    const auto n = static_cast<std::size_t>(rng.range(1, 30));
    const auto docs = testsupport::random_corpus(rng, n, vocab, 25);
    ChunkingConfig chunking;
    chunking.target_size = static_cast<std::size_t>(rng.range(20, 120));
    chunking.overlap = static_cast<std::size_t>(rng.range(0, 10));
    auto embedder = std::make_shared<ReferenceEmbedder>(64);
    const auto engine = SearchEngine::build(docs, chunking, BM25Params{}, embedder);

    HostBoostTable hosts;
    for (const auto& d : docs) {
      if (hosts.weights().count(d.host) == 0 && rng.chance(0.7)) hosts.set(d.host, rng.uniform());
    }
    FusionConfig cfg;
    cfg.bm25_boost = rng.uniform(0.0, 1.0);
    cfg.host_boost = rng.uniform(0.0, 1.0);
    cfg.top_k = n;
    cfg.dense_candidates = engine.dense().size();
    cfg.sparse_candidates = n;

    std::vector<std::string> texts;
    std::vector<std::vector<std::vector<double>>> vectors(n);
    std::vector<double> weights;
    for (const auto& d : docs) {
      texts.push_back(d.title + " " + d.body);
      weights.push_back(hosts.lookup(d.host));
      vectors[static_cast<std::size_t>(d.doc_id)].push_back(embedder->embed(d.title).values);
    }
    for (const auto& c : chunk_corpus(docs, chunking)) {
      vectors[static_cast<std::size_t>(c.doc_id)].push_back(embedder->embed(c.text).values);
    }
    const std::string query = testsupport::random_text(rng, vocab, 2);
    const auto qv = embedder->embed(query);
    const auto want = oracle::exhaustive_fusion(texts, vectors, weights, query, qv.values,
                                                cfg.bm25_boost, cfg.host_boost, cfg.top_k);
    const auto have = engine.search(query, Strategy::kHybridHost, cfg, hosts);
    const std::string where = "corpus " + std::to_string(iter);
    o.require(have.size() == want.size(), where + ": result count");
    for (std::size_t i = 0; i < std::min(have.size(), want.size()); ++i) {
      const auto& h = have[i];
      const auto& w = want[i];
      o.require(h.doc_id == static_cast<DocId>(w.doc), where + ": rank " + std::to_string(i));
      o.require(std::abs(h.cosine_term - w.cosine) <= 1e-12 && std::abs(h.bm25_term - w.bm25) <= 1e-12 &&
                    std::abs(h.host_term - w.host) <= 1e-12,
                where + ": score terms at rank " + std::to_string(i));
      o.require(h.total == h.cosine_term + h.bm25_term + h.host_term, where + ": total != sum");
    }
  }
  if (o.pass) o.detail = "100 random corpora ranked identically";
  return o;
}

Outcome strategy_criterion() {
  Outcome o;
  const auto set = testsupport::strategy_corpus();
  const auto engine = SearchEngine::build(set.docs, set.chunking, BM25Params{}, set.embedder);
  auto mean = [&](Strategy s) {
    return evaluate_strategy(engine, set.golden, s, set.fusion, set.hosts).mean_ndcg;
  };
  const double bm = mean(Strategy::kBm25Only), de = mean(Strategy::kDenseOnly),
               hy = mean(Strategy::kHybrid), hh = mean(Strategy::kHybridHost);
  o.detail = std::to_string(set.docs.size()) + " docs/" + std::to_string(set.golden.size()) +
             " queries: bm25_only " + fmt("%.4f", bm) + " dense_only " + fmt("%.4f", de) +
             " hybrid " + fmt("%.4f", hy) + " hybrid_host " + fmt("%.4f", hh);
  o.require(set.docs.size() == 60 && set.golden.size() == 20, "corpus shape " + o.detail);
  o.require(hh >= hy && hy > de && de > bm, "ordering violated: " + o.detail);
  return o;
}

Outcome sweep_criterion() {
  Outcome o;
  const auto set = testsupport::planted_sweep_corpus();
  const auto engine = SearchEngine::build(set.docs, set.chunking, BM25Params{}, set.embedder);
  const std::vector<double> values = {0.1, 0.3, 0.6, 1.0};
  const auto r = sweep_boosts(engine, set.golden, parse_grid("0.1,0.3,0.6,1.0x0.1,0.3,0.6,1.0"),
                              set.fusion, set.hosts);
  const auto& best = r.cells[r.best];
  o.detail = "best (" + fmt("%.1f", best.bm25_boost) + ", " + fmt("%.1f", best.host_boost) +
             ") mean " + fmt("%.4f", best.mean_ndcg);
  o.require(r.cells.size() == 16, "grid size");
  o.require(best.bm25_boost == 0.3 && best.host_boost == 0.1, "wrong best cell: " + o.detail);
  for (std::size_t h = 0; h < values.size(); ++h) {
    // Rises (weakly) to a peak, then falls (weakly).
    std::size_t i = 1;
    while (i < values.size() && r.cells[i * 4 + h].mean_ndcg >= r.cells[(i - 1) * 4 + h].mean_ndcg) ++i;
    while (i < values.size() && r.cells[i * 4 + h].mean_ndcg <= r.cells[(i - 1) * 4 + h].mean_ndcg) ++i;
    o.require(i == values.size(), "not unimodal in bm25_boost at host_boost " + fmt("%.1f", values[h]));
  }
  return o;
}

Outcome chunking_criterion() {
  Outcome o;
  const auto set = testsupport::chunking_corpus();
  const auto rows = chunk_size_experiment(set.docs, set.golden, parse_chunk_sizes("1000:100,5000:1000"),
                                          set.embedder, BM25Params{}, set.fusion);
  o.detail = "1000/100 " + fmt("%.4f", rows[0].mean_ndcg) + " vs 5000/1000 " +
             fmt("%.4f", rows[1].mean_ndcg);
  o.require(rows[0].mean_ndcg >= rows[1].mean_ndcg, "smaller chunks lost: " + o.detail);
  testsupport::Rng rng(6006);
  for (int iter = 0; iter < 1000 && o.pass; ++iter) {
    const auto cfg = testsupport::random_chunking(rng);
    const auto doc = testsupport::make_doc(0, testsupport::random_body(rng, 600));
    const auto v = oracle::check_chunks(doc.body, chunk_document(doc, cfg), cfg);
    o.require(v.empty(), "chunk property case " + std::to_string(iter) + ": " + v);
  }
  if (o.pass) o.detail += ", 1000 chunker property cases";
  return o;
}

Outcome contrastive_criterion() {
  Outcome o;
  testsupport::Rng rng(7007);
  double worst = 0.0;
  for (int iter = 0; iter < 20; ++iter) {
    const auto model = initial_projection(8, 16, 500 + static_cast<std::uint64_t>(iter), 0.07);
    const auto batch = testsupport::random_triples(rng, 3, 16);
    worst = std::max(worst, testsupport::finite_difference_check(batch, model, 1e-5).max_relative_error);
  }
  o.require(worst < 1e-4, "gradient relative error " + fmt("%.3g", worst));

  const ReferenceEmbedder base(64);
  const auto texts = testsupport::training_triples(32, 5);
  const auto triples = embed_triples(texts, base);
  TrainConfig cfg;
  const auto result = train_projection(triples, cfg, 16);
  const auto cos = pair_cosines(triples, result.model);
  o.require(result.epoch_loss.back() < result.epoch_loss.front(), "loss did not decrease");
  o.require(cos.positive > cos.negative, "positive cosine not above negative");
  if (o.pass) {
    o.detail = "max rel err " + fmt("%.2g", worst) + ", loss " + fmt("%.4f", result.epoch_loss.front()) +
               " -> " + fmt("%.4f", result.epoch_loss.back()) + ", cos " + fmt("%.3f", cos.positive) +
               " vs " + fmt("%.3f", cos.negative);
  }
  return o;
}

Outcome guard_criterion() {
  Outcome o;
  const auto fixture = testsupport::negative_fixture();
  const auto engine = SearchEngine::build(fixture.base.docs, fixture.base.chunking, BM25Params{},
                                          fixture.base.embedder);
  const std::string prompt(kDefaultSystemPrompt);
  std::vector<std::vector<bool>> blocked;
  for (const double t : {0.7, 0.8, 0.9}) {
    NegativePipeline p;
    p.engine = &engine;
    p.hosts = fixture.base.hosts;
    p.answerer = testsupport::negative_answerer(fixture, engine, prompt);
    p.guard.threshold = t;
    const auto r = run_negative_suite(p, fixture.negatives);
    const auto& jb = r.report.row(NegativeCategory::kJailbreak);
    const auto& ns = r.report.row(NegativeCategory::kNsfw);
    const auto& ir = r.report.row(NegativeCategory::kIrrelevant);
    const std::string rates = std::to_string(jb.nulls) + "/" + std::to_string(jb.total) + ", " +
                              std::to_string(ns.nulls) + "/" + std::to_string(ns.total) + ", " +
                              std::to_string(ir.nulls) + "/" + std::to_string(ir.total);
    o.require(jb.nulls == 11 && jb.total == 12 && ns.nulls == 6 && ns.total == 6 &&
                  ir.nulls == 12 && ir.total == 12,
              "threshold " + fmt("%.1f", t) + " null rates " + rates);
    std::vector<bool> b;
    for (const auto& a : r.audits) b.push_back(a.guard.verdict == GuardVerdict::kBlocked);
    blocked.push_back(b);

    GuardConfig cfg;
    cfg.threshold = t;
    const auto same = guard_check(prompt, prompt, "", cfg, engine.embedder());
    o.require(same.verdict == GuardVerdict::kBlocked && same.similarity == 1.0,
              "identical answer not blocked at " + fmt("%.1f", t));
    if (o.pass) o.detail = "null rates " + rates + " at 0.7/0.8/0.9";
  }
  for (std::size_t k = 1; k < blocked.size(); ++k) {
    for (std::size_t i = 0; i < blocked[k].size(); ++i) {
      o.require(!blocked[k][i] || blocked[k - 1][i], "raising the threshold blocked query " + std::to_string(i));
    }
  }
  return o;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome judge_criterion(const fs::path& data) {
  Outcome o;
  const auto golden_dir = data.parent_path() / "golden";
  o.require(render_groundedness_prompt("Select the layer, then choose Edit > Fill.",
                                       "Choose Edit > Fill after selecting the layer.") ==
                read_file(golden_dir / "groundedness.txt"),
            "groundedness prompt differs from golden file");
  o.require(render_accuracy_prompt("Photoshop", "How do I fill a selection?", "Choose Edit > Fill.",
                                   "Use Edit > Fill on the selection.") ==
                read_file(golden_dir / "accuracy.txt"),
            "accuracy prompt differs from golden file");
  for (int i = 0; i <= 10; ++i) {
    const std::string s = fmt("%.1f", i / 10.0);
    double v = -1.0;
    try {
      v = parse_judge_score("Score: " + s);
    } catch (const Error&) {
    }
    o.require(std::abs(v - i / 10.0) < 1e-12, "score " + s + " did not round-trip");
  }
  const std::vector<std::string> pieces = {"excellent", "score", "N/A", "good", "1.5", "7", "-0.4",
                                           "+1", "10", "0.55", "2.0", "1.1", "-1", "..", "x9",
                                           "Score:", "(", ")", "1.0.1", "-0.0"};
  testsupport::Rng rng(9009);
  int rejected = 0;
  for (int iter = 0; iter < 50; ++iter) {
    std::string reply;
    const auto n = rng.range(1, 5);
    for (int k = 0; k < n; ++k) {
      if (k) reply += rng.chance(0.5) ? " " : ", ";
      reply += rng.pick(pieces);
    }
    try {
      parse_judge_score(reply);
      o.require(false, "accepted invalid reply \"" + reply + "\"");
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kParse) ++rejected;
    }
  }
  o.require(rejected == 50, "only " + std::to_string(rejected) + " of 50 fuzzed replies rejected");
  if (o.pass) o.detail = "2 golden prompts, 11 scores, 50 fuzzed replies rejected";
  return o;
}

Outcome cli_criterion(const std::string& cli) {
  Outcome o;
  const auto root = fs::temp_directory_path() / "hybridrag-acceptance-cli";
  fs::remove_all(root);
  fs::create_directories(root);
  const auto set = testsupport::strategy_corpus();
  testsupport::write_corpus((root / "corpus.jsonl").string(), set.docs);
  testsupport::write_golden((root / "golden.jsonl").string(), set.golden);
  {
    std::ofstream hosts(root / "hosts.txt");
    for (const auto& [h, w] : set.hosts.weights()) hosts << h << ' ' << w << '\n';
  }
  auto pipeline = [&](const std::string& run, unsigned threads) -> std::string {
    const auto dir = root / run;
    const std::string t = " --threads " + std::to_string(threads) + " ";
    const std::string idx = (dir / "index").string();
    const std::string g = (root / "golden.jsonl").string();
    const std::string h = (root / "hosts.txt").string();
    const std::string cmds[] = {
        cli + t + "ingest --corpus " + (root / "corpus.jsonl").string() + " --out " + idx,
        cli + t + "eval --index " + idx + " --golden " + g + " --hosts " + h,
        cli + t + "--format records eval --index " + idx + " --golden " + g + " --hosts " + h +
            " --judge mock",
        cli + t + "tune --index " + idx + " --golden " + g + " --hosts " + h,
    };
    fs::create_directories(dir);
    std::string out;
    int step = 0;
    for (const auto& c : cmds) {
      const auto file = dir / ("step" + std::to_string(step++) + ".out");
      const int rc = std::system((c + " > " + file.string() + " 2>&1").c_str());
      o.require(rc == 0, run + ": command failed: " + c);
      out += read_file(file);
    }
    for (const char* f : {"manifest.json", "documents.jsonl", "chunks.bin", "sparse.bin", "dense.bin"}) {
      out += read_file(dir / "index" / f);
    }
    return out;
  };
  const auto a = pipeline("run1", 1);
  const auto b = pipeline("run2", 4);
  const auto c = pipeline("run3", 1);
  o.require(!a.empty() && a == b && a == c, "outputs differ between runs");
  if (o.pass) o.detail = "3 runs (threads 1, 4, 1) byte-identical, " + std::to_string(a.size()) + " bytes";
  fs::remove_all(root);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  fs::path data = "tests/data";
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--cli") cli = argv[i + 1];
    else if (flag == "--data") data = argv[i + 1];
  }
  if (cli.empty()) {
    std::fprintf(stderr, "usage: acceptance --cli <hybridrag> --data <dir>\n");
    return 2;
  }

  struct Criterion {
    int id;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, 5, ndcg_criterion},
      {2, 10, bm25_criterion},
      {3, 30, fusion_criterion},
      {4, 30, strategy_criterion},
      {5, 60, sweep_criterion},
      {6, 60, chunking_criterion},
      {7, 60, contrastive_criterion},
      {8, 5, guard_criterion},
      {9, 5, [&] { return judge_criterion(data); }},
      {10, 120, [&] { return cli_criterion(cli); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.pass && secs > c.budget_s) {
      o.pass = false;
      o.detail = "over budget of " + fmt("%.0f", c.budget_s) + " s; " + o.detail;
    }
    failures += o.pass ? 0 : 1;
    std::printf("criterion %d: %s (%.2f s) %s\n", c.id, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
