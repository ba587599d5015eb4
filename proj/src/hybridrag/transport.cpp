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

#include "hybridrag/transport.hpp"

#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>

#include "httplib.h"

#include "hybridrag/error.hpp"

namespace hybridrag {

std::string escape_line(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (const char c : raw) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape_line(std::string_view escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    if (escaped[i] != '\\' || i + 1 == escaped.size()) {
      out.push_back(escaped[i]);
      continue;
    }
    const char next = escaped[++i];
    switch (next) {
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case '\\': out.push_back('\\'); break;
      default:
        out.push_back('\\');
        out.push_back(next);
    }
  }
  return out;
}

Handshake parse_handshake(std::string_view line) {
  Handshake hs;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t begin = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (begin == i) break;
    const std::string_view token = line.substr(begin, i - begin);
    const auto eq = token.find('=');
    if (eq == std::string_view::npos) {
      hs.emplace(std::string(token), "");
    } else {
      hs.emplace(std::string(token.substr(0, eq)),
                 std::string(token.substr(eq + 1)));
    }
  }
  return hs;
}

std::unique_ptr<LineTransport> open_transport(const std::string& spec) {
  if (spec.rfind("process:", 0) == 0) {
    return std::make_unique<ProcessTransport>(spec.substr(8));
  }
  if (spec.rfind("http://", 0) == 0) {
    return std::make_unique<HttpTransport>(spec);
  }
  fail(ErrorCode::kInvalidArgument,
       "unsupported transport '" + spec +
           "' (expected process:<command> or http://host:port/path)");
}

// ---------------------------------------------------------------------------
// ProcessTransport

ProcessTransport::ProcessTransport(std::string command)
    : command_(std::move(command)) {
  if (command_.empty()) {
    fail(ErrorCode::kInvalidArgument, "empty transport command");
  }
  int sv[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM, 0, sv) != 0) {
    fail(ErrorCode::kTransport,
         std::string("socketpair failed: ") + std::strerror(errno));
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(sv[0]);
    ::close(sv[1]);
    fail(ErrorCode::kTransport, std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::close(sv[0]);
    ::dup2(sv[1], STDIN_FILENO);
    ::dup2(sv[1], STDOUT_FILENO);
    ::close(sv[1]);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(sv[1]);
  fd_ = sv[0];
  pid_ = pid;
  try {
    handshake_ = parse_handshake(read_line());
  } catch (...) {
    ::close(fd_);
    ::waitpid(pid_, nullptr, 0);
    fd_ = -1;
    throw;
  }
}

ProcessTransport::~ProcessTransport() {
  if (fd_ >= 0) {
    ::shutdown(fd_, SHUT_WR);
    ::close(fd_);
  }
  if (pid_ > 0) ::waitpid(pid_, nullptr, 0);
}

std::string ProcessTransport::read_line() {
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    char chunk[4096];
    const ssize_t got = ::read(fd_, chunk, sizeof chunk);
    if (got < 0 && errno == EINTR) continue;
    if (got <= 0) {
      fail(ErrorCode::kTransport,
           "transport process '" + command_ + "' closed its output");
    }
    buffer_.append(chunk, static_cast<std::size_t>(got));
  }
}

void ProcessTransport::write_all(std::string_view data) {
  while (!data.empty()) {
    const ssize_t sent = ::send(fd_, data.data(), data.size(), MSG_NOSIGNAL);
    if (sent < 0 && errno == EINTR) continue;
    if (sent <= 0) {
      fail(ErrorCode::kTransport,
           "transport process '" + command_ + "' stopped reading");
    }
    data.remove_prefix(static_cast<std::size_t>(sent));
  }
}

std::vector<std::string> ProcessTransport::exchange(
    std::span<const std::string> items) {
  std::lock_guard<std::mutex> lock(mutex_);
  std::string request;
  for (const auto& item : items) request.append(escape_line(item)).push_back('\n');
  write_all(request);
  std::vector<std::string> replies;
  replies.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    replies.push_back(unescape_line(read_line()));
  }
  return replies;
}

// ---------------------------------------------------------------------------
// HttpTransport

HttpTransport::HttpTransport(std::string url) : url_(std::move(url)) {
  const auto after_scheme = url_.find("://");
  const auto slash = url_.find('/', after_scheme + 3);
  origin_ = url_.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : url_.substr(slash);
  if (origin_.size() <= after_scheme + 3) {
    fail(ErrorCode::kInvalidArgument, "http transport URL has no host: " + url_);
  }
}

std::vector<std::string> HttpTransport::post(std::span<const std::string> items) {
  httplib::Client client(origin_);
  client.set_connection_timeout(10);
  client.set_read_timeout(120);
  std::string body;
  for (const auto& item : items) body.append(escape_line(item)).push_back('\n');
  auto res = client.Post(path_, body, "text/plain");
  if (!res) {
    fail(ErrorCode::kTransport,
         "POST " + url_ + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    fail(ErrorCode::kTransport,
         "POST " + url_ + " returned HTTP " + std::to_string(res->status));
  }
  std::vector<std::string> lines;
  std::string_view rest = res->body;
  while (!rest.empty()) {
    const auto nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    if (nl == std::string_view::npos) break;
    rest.remove_prefix(nl + 1);
  }
  if (lines.empty()) fail(ErrorCode::kTransport, url_ + ": empty response");
  if (!have_handshake_) {
    handshake_ = parse_handshake(lines.front());
    have_handshake_ = true;
  }
  lines.erase(lines.begin());
  if (lines.size() != items.size()) {
    fail(ErrorCode::kTransport,
         url_ + ": expected " + std::to_string(items.size()) +
             " reply lines, got " + std::to_string(lines.size()));
  }
  for (auto& l : lines) l = unescape_line(l);
  return lines;
}

const Handshake& HttpTransport::handshake() {
  std::lock_guard<std::mutex> lock(mutex_);
  if (!have_handshake_) post({});
  return handshake_;
}

std::vector<std::string> HttpTransport::exchange(
    std::span<const std::string> items) {
  std::lock_guard<std::mutex> lock(mutex_);
  return post(items);
}

// ---------------------------------------------------------------------------
// ExternalEmbedder

EmbeddingVector parse_vector_line(std::string_view line, std::size_t dims) {
  std::vector<double> values;
  values.reserve(dims);
  std::size_t i = 0;
  while (i <= line.size()) {
    auto comma = line.find(',', i);
    if (comma == std::string_view::npos) comma = line.size();
    std::string_view field = line.substr(i, comma - i);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() ||
        !std::isfinite(v)) {
      fail(ErrorCode::kTransport,
           "malformed vector component '" + std::string(field) + "'");
    }
    values.push_back(v);
    i = comma + 1;
  }
  if (values.size() != dims) {
    fail(ErrorCode::kDimensionMismatch,
         "external embedder returned " + std::to_string(values.size()) +
             " components, handshake declared " + std::to_string(dims));
  }
  return normalized(std::move(values));
}

ExternalEmbedder::ExternalEmbedder(std::unique_ptr<LineTransport> transport)
    : transport_(std::move(transport)) {
  const auto& hs = transport_->handshake();
  auto it = hs.find("dims");
  if (it == hs.end()) {
    fail(ErrorCode::kTransport,
         "embedder handshake from '" + transport_->endpoint() +
             "' does not declare dims");
  }
  std::size_t dims = 0;
  const auto& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), dims);
  if (ec != std::errc() || ptr != s.data() + s.size() || dims == 0) {
    fail(ErrorCode::kTransport, "embedder handshake has invalid dims '" + s + "'");
  }
  dims_ = dims;
  auto id = hs.find("id");
  id_ = "external:" + (id != hs.end() && !id->second.empty()
                           ? id->second
                           : transport_->endpoint()) +
        "-" + std::to_string(dims_);
}

EmbeddingVector ExternalEmbedder::embed(std::string_view text) const {
  const std::string item(text);
  return embed_batch(std::span<const std::string>(&item, 1)).front();
}

std::vector<EmbeddingVector> ExternalEmbedder::embed_batch(
    std::span<const std::string> texts) const {
  const auto lines = transport_->exchange(texts);
  std::vector<EmbeddingVector> out;
  out.reserve(lines.size());
  for (const auto& line : lines) out.push_back(parse_vector_line(line, dims_));
  return out;
}

}  // namespace hybridrag
