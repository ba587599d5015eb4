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

#include "hybridrag/index_store.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "hybridrag/binary_io.hpp"
#include "hybridrag/error.hpp"

namespace hybridrag {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kChunkMagic = "HRCHUNK1";
constexpr std::uint32_t kChunkVersion = 1;
constexpr const char* kFormatName = "hybridrag-index";

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + p.string());
  return out;
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot read " + p.string());
  return in;
}

void close_checked(std::ofstream& out, const fs::path& p) {
  out.close();
  if (!out) fail(ErrorCode::kIo, "failed writing " + p.string());
}

}  // namespace

void save_index(const fs::path& dir, const SearchEngine& engine,
                const std::string& embedder_spec) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());

  {
    const auto p = dir / "documents.jsonl";
    auto out = open_out(p);
    for (const auto& d : engine.docs()) {
      nlohmann::ordered_json rec;
      rec["doc_id"] = d.doc_id;
      rec["url"] = d.url;
      rec["host"] = d.host;
      rec["title"] = d.title;
      rec["body"] = d.body;
      out << rec.dump() << '\n';
    }
    close_checked(out, p);
  }
  {
    const auto p = dir / "chunks.bin";
    auto out = open_out(p);
    binary::put_magic(out, kChunkMagic);
    binary::put_u32(out, kChunkVersion);
    binary::put_u64(out, engine.chunks().size());
    for (const auto& c : engine.chunks()) {
      binary::put_i64(out, c.doc_id);
      binary::put_u64(out, c.char_start);
      binary::put_u64(out, c.char_end);
    }
    close_checked(out, p);
  }
  {
    const auto p = dir / "sparse.bin";
    auto out = open_out(p);
    engine.sparse().save(out);
    close_checked(out, p);
  }
  {
    const auto p = dir / "dense.bin";
    auto out = open_out(p);
    engine.dense().save(out);
    close_checked(out, p);
  }

  nlohmann::ordered_json m;
  m["format"] = kFormatName;
  m["format_version"] = 1;
  m["documents"] = engine.docs().size();
  m["chunks"] = engine.chunks().size();
  m["vectors"] = engine.dense().size();
  m["chunking"] = {{"target_size", engine.chunking().target_size},
                   {"overlap", engine.chunking().overlap},
                   {"sentence_delimiters", engine.chunking().sentence_delimiters}};
  m["bm25"] = {{"k1", engine.sparse().params().k1},
               {"b", engine.sparse().params().b}};
  m["embedder"] = {{"id", engine.dense().embedder_id()},
                   {"dims", engine.dense().dims()},
                   {"spec", embedder_spec}};
  const auto p = dir / "manifest.json";
  auto out = open_out(p);
  out << m.dump(2) << '\n';
  close_checked(out, p);
}

IndexManifest read_manifest(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    fail(ErrorCode::kIo, "index directory does not exist: " + dir.string());
  }
  auto in = open_in(dir / "manifest.json");
  IndexManifest m;
  try {
    const auto j = nlohmann::json::parse(in);
    if (j.at("format").get<std::string>() != kFormatName) {
      fail(ErrorCode::kParse, "not a hybridrag index manifest");
    }
    m.format_version = j.at("format_version").get<std::uint32_t>();
    if (m.format_version != 1) {
      fail(ErrorCode::kParse, "index format version " +
                                  std::to_string(m.format_version) +
                                  " is not supported");
    }
    m.num_documents = j.at("documents").get<std::size_t>();
    m.num_chunks = j.at("chunks").get<std::size_t>();
    m.num_vectors = j.at("vectors").get<std::size_t>();
    const auto& c = j.at("chunking");
    m.chunking.target_size = c.at("target_size").get<std::size_t>();
    m.chunking.overlap = c.at("overlap").get<std::size_t>();
    m.chunking.sentence_delimiters = c.at("sentence_delimiters").get<std::string>();
    m.bm25.k1 = j.at("bm25").at("k1").get<double>();
    m.bm25.b = j.at("bm25").at("b").get<double>();
    const auto& e = j.at("embedder");
    m.embedder_id = e.at("id").get<std::string>();
    m.embedder_dims = e.at("dims").get<std::size_t>();
    m.embedder_spec = e.at("spec").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, "bad index manifest: " + std::string(e.what()));
  }
  return m;
}

SearchEngine load_index(const fs::path& dir,
                        std::shared_ptr<const Embedder> embedder) {
  const auto manifest = read_manifest(dir);

  std::vector<Document> docs;
  {
    auto in = open_in(dir / "documents.jsonl");
    std::string line;
    while (std::getline(in, line)) {
      try {
        const auto j = nlohmann::json::parse(line);
        Document d;
        d.doc_id = j.at("doc_id").get<DocId>();
        d.url = j.at("url").get<std::string>();
        d.host = j.at("host").get<std::string>();
        d.title = j.at("title").get<std::string>();
        d.body = j.at("body").get<std::string>();
        docs.push_back(std::move(d));
      } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::kParse, "bad documents.jsonl record: " + std::string(e.what()));
      }
    }
    check_dense_doc_ids(docs);
  }

  std::vector<Chunk> chunks;
  {
    auto in = open_in(dir / "chunks.bin");
    binary::Reader r(in, "chunk table");
    r.expect_magic(kChunkMagic);
    if (r.u32() != kChunkVersion) fail(ErrorCode::kParse, "unsupported chunk table version");
    const auto count = r.count(1ULL << 32);
    chunks.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      Chunk c;
      c.chunk_id = static_cast<ChunkId>(i);
      c.doc_id = r.i64();
      c.char_start = r.u64();
      c.char_end = r.u64();
      if (c.doc_id < 0 || static_cast<std::size_t>(c.doc_id) >= docs.size()) {
        fail(ErrorCode::kParse, "chunk table references unknown document");
      }
      const auto& body = docs[static_cast<std::size_t>(c.doc_id)].body;
      if (c.char_start >= c.char_end || c.char_end > body.size()) {
        fail(ErrorCode::kParse, "chunk table has out-of-range offsets");
      }
      c.text = body.substr(c.char_start, c.char_end - c.char_start);
      chunks.push_back(std::move(c));
    }
  }

  auto sparse_in = open_in(dir / "sparse.bin");
  auto sparse = SparseIndex::load(sparse_in);
  auto dense_in = open_in(dir / "dense.bin");
  auto dense = DenseIndex::load(dense_in);

  if (docs.size() != manifest.num_documents || chunks.size() != manifest.num_chunks ||
      dense.size() != manifest.num_vectors) {
    fail(ErrorCode::kParse, "index files disagree with manifest counts");
  }
  return SearchEngine(std::move(docs), std::move(chunks), manifest.chunking,
                      std::move(sparse), std::move(dense), std::move(embedder));
}

}  // namespace hybridrag
