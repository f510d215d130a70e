// Copyright 2026 The VPE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>

#include "json.hpp"
#include "vpe/lang/error.hpp"
#include "vpe/tools.hpp"

// JSON-over-HTTP protocol between the engine and an out-of-process tool
// server.
//
//   POST /v1/tool/<name>
//     {"scene_ref": "...", "patch": [x0, y0, x1, y1],
//      "args": {...}, "config": {"detection_threshold": ..,
//      "text_match_threshold": .., "strict_find": ..}}
//   -> 200 {"ok": true, "value": ...}
//   -> 200 {"ok": false, "error": {"class": "ToolError", "tool": "...",
//                                  "message": "...", "retryable": bool}}
//   -> 400 {"ok": false, "error": {"class": "BadRequest", "field": "...",
//                                  "message": "..."}}
//
//   GET /healthz -> {"ok": true, "backend": "...", "tools": [...]}
//
// Per-tool `args` and `value`:
//
//   find             {query}                      -> [box, ...]
//   exists           {query}                      -> bool
//   verify_property  {noun, attribute}            -> bool
//   best_image_match {patches: [{scene_ref, patch}], query} -> box
//   best_text_match  {queries: [text]}            -> text
//   compute_depth    {}                           -> number
//   simple_query     {question}                   -> text
//   select_answer    {context, options: [text]}   -> index
//
// `scene_ref` and `patch` are required by every tool except
// best_image_match and select_answer.
namespace vpe::wire {

using json = nlohmann::json;

inline constexpr std::string_view kToolPathPrefix = "/v1/tool/";
inline constexpr std::string_view kHealthPath = "/healthz";

/// Tools reachable over the wire, in protocol order.
std::span<const std::string_view> tool_names();

/// Malformed request or response; `field()` names the offending member.
class WireError : public std::runtime_error {
 public:
  WireError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ToolRequest {
  std::string tool;
  std::string scene_ref;
  std::optional<BBox> patch;
  json args = json::object();
  ToolConfig config;
};

json encode_box(const BBox& b);
BBox decode_box(const json& j, const std::string& field);

json encode_config(const ToolConfig& c);
ToolConfig decode_config(const json& j);

json encode_request(const ToolRequest& r);
ToolRequest decode_request(std::string_view tool, const json& body);

json encode_error(const lang::VplError& e);
lang::VplError decode_error(const json& error, std::string_view tool);

/// Runs one request against `backend`. Tool failures become `ok: false`
/// payloads; malformed requests raise WireError.
json handle_request(const ToolBackend& backend, const ToolRequest& request);

/// HTTP front end serving a backend over the protocol above.
class ToolServer {
 public:
  explicit ToolServer(std::shared_ptr<const ToolBackend> backend);
  ~ToolServer();
  ToolServer(const ToolServer&) = delete;
  ToolServer& operator=(const ToolServer&) = delete;

  /// Binds to host:port (port 0 picks a free one) and returns the port.
  /// Throws std::runtime_error when the address is unavailable.
  int bind(const std::string& host, int port);

  /// Serves on a background thread until stop().
  void start();
  /// Serves on the calling thread until stop().
  void serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct RemoteOptions {
  std::string host = "127.0.0.1";
  int port = 8090;
  int max_in_flight = 4;
  int max_retries = 3;
  std::chrono::milliseconds backoff{50};
  std::chrono::milliseconds timeout{10'000};
};

/// ToolBackend speaking the protocol to a tool server. Thread-safe; at most
/// `max_in_flight` requests are outstanding at once. Transport failures and
/// 5xx responses are retried with exponential backoff, then surface as a
/// non-retryable ToolError.
class RemoteBackend final : public ToolBackend {
 public:
  explicit RemoteBackend(RemoteOptions options);
  ~RemoteBackend() override;

  std::string_view kind() const override { return "remote"; }

  /// True when GET /healthz answers.
  bool ping() const;

  std::vector<ImagePatch> find(const ImagePatch& image, std::string_view query,
                               const ToolConfig& config) const override;
  bool exists(const ImagePatch& image, std::string_view query,
              const ToolConfig& config) const override;
  bool verify_property(const ImagePatch& image, std::string_view noun,
                       std::string_view attribute, const ToolConfig& config) const override;
  ImagePatch best_image_match(std::span<const ImagePatch> patches, std::string_view query,
                              const ToolConfig& config) const override;
  std::string best_text_match(std::span<const std::string> queries, const ImagePatch& image,
                              const ToolConfig& config) const override;
  double compute_depth(const ImagePatch& image) const override;
  std::string simple_query(const ImagePatch& image, std::string_view question) const override;
  std::size_t select_answer(std::string_view context,
                            std::span<const std::string> options) const override;

 private:
  json call(const ToolRequest& request) const;

  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vpe::wire
