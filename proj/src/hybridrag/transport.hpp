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

// Line-oriented request/response transport shared by external embedders and
// external judges.
//
// The endpoint first announces itself with a handshake line of
// space-separated `key=value` (or bare `key`) tokens, e.g. `dims=384 id=e5`
// for an embedder or `judge id=gpt` for a judge. Each request is one line per
// item; the endpoint answers with exactly one line per item, in order.
// Backslash, newline and carriage return inside an item are escaped as
// `\\`, `\n` and `\r`.
//
//   process:<command>  command runs under /bin/sh -c; the handshake is the
//                      first line it prints, then it serves requests on
//                      stdin/stdout for the lifetime of the transport.
//   http://host[:port]/path
//                      every exchange is one POST of the request lines
//                      (text/plain); the response body is the handshake line
//                      followed by the reply lines.

#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybridrag/embedding.hpp"

namespace hybridrag {

std::string escape_line(std::string_view raw);
std::string unescape_line(std::string_view escaped);

using Handshake = std::map<std::string, std::string>;
Handshake parse_handshake(std::string_view line);

class LineTransport {
 public:
  virtual ~LineTransport() = default;

  virtual const Handshake& handshake() = 0;
  // Sends raw (unescaped) items and returns the unescaped replies.
  virtual std::vector<std::string> exchange(std::span<const std::string> items) = 0;
  virtual const std::string& endpoint() const = 0;
};

// Accepts "process:<command>" or an http:// URL.
std::unique_ptr<LineTransport> open_transport(const std::string& spec);

class ProcessTransport final : public LineTransport {
 public:
  explicit ProcessTransport(std::string command);
  ~ProcessTransport() override;

  ProcessTransport(const ProcessTransport&) = delete;
  ProcessTransport& operator=(const ProcessTransport&) = delete;

  const Handshake& handshake() override { return handshake_; }
  std::vector<std::string> exchange(std::span<const std::string> items) override;
  const std::string& endpoint() const override { return command_; }

 private:
  std::string read_line();
  void write_all(std::string_view data);

  std::string command_;
  int fd_ = -1;
  int pid_ = -1;
  std::string buffer_;
  Handshake handshake_;
  std::mutex mutex_;
};

class HttpTransport final : public LineTransport {
 public:
  explicit HttpTransport(std::string url);

  const Handshake& handshake() override;
  std::vector<std::string> exchange(std::span<const std::string> items) override;
  const std::string& endpoint() const override { return url_; }

 private:
  std::vector<std::string> post(std::span<const std::string> items);

  std::string url_;
  std::string origin_;
  std::string path_;
  Handshake handshake_;
  bool have_handshake_ = false;
  std::mutex mutex_;
};

// Embedder served over a LineTransport. Replies are comma-separated decimals
// and are re-normalized on arrival.
class ExternalEmbedder final : public Embedder {
 public:
  explicit ExternalEmbedder(std::unique_ptr<LineTransport> transport);

  const std::string& identifier() const override { return id_; }
  std::size_t dims() const override { return dims_; }
  EmbeddingVector embed(std::string_view text) const override;
  std::vector<EmbeddingVector> embed_batch(
      std::span<const std::string> texts) const override;

 private:
  std::unique_ptr<LineTransport> transport_;
  std::size_t dims_ = 0;
  std::string id_;
};

EmbeddingVector parse_vector_line(std::string_view line, std::size_t dims);

}  // namespace hybridrag
