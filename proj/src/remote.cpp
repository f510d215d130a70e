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

#include <semaphore>

#include "httplib.h"
#include "vpe/wire.hpp"

namespace vpe::wire {

using lang::VplError;
using lang::VplException;

namespace {

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json bad_request(const std::string& field, const std::string& message) {
  return json{{"ok", false},
              {"error", {{"class", "BadRequest"}, {"field", field}, {"message", message}}}};
}

}  // namespace

struct ToolServer::Impl {
  std::shared_ptr<const ToolBackend> backend;
  httplib::Server server;
  std::thread thread;
};

ToolServer::ToolServer(std::shared_ptr<const ToolBackend> backend)
    : impl_(std::make_unique<Impl>()) {
  impl_->backend = std::move(backend);
  Impl* impl = impl_.get();

  impl->server.Get(std::string(kHealthPath), [impl](const httplib::Request&,
                                                    httplib::Response& res) {
    json tools = json::array();
    for (auto name : tool_names()) tools.push_back(name);
    reply(res, 200, json{{"ok", true}, {"backend", impl->backend->kind()}, {"tools", tools}});
  });

  impl->server.Post(std::string(kToolPathPrefix) + "([A-Za-z_]+)",
                    [impl](const httplib::Request& req, httplib::Response& res) {
                      const std::string tool = req.matches[1];
                      json body;
                      try {
                        body = json::parse(req.body);
                      } catch (const json::parse_error& e) {
                        reply(res, 400, bad_request("", std::string("invalid JSON: ") + e.what()));
                        return;
                      }
                      try {
                        reply(res, 200, handle_request(*impl->backend, decode_request(tool, body)));
                      } catch (const WireError& e) {
                        reply(res, 400, bad_request(e.field(), e.what()));
                      } catch (const std::exception& e) {
                        reply(res, 500,
                              json{{"ok", false},
                                   {"error", {{"class", "InternalError"}, {"message", e.what()}}}});
                      }
                    });
}

ToolServer::~ToolServer() { stop(); }

int ToolServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw std::runtime_error("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void ToolServer::start() {
  impl_->thread = std::thread([impl = impl_.get()] { impl->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void ToolServer::serve() { impl_->server.listen_after_bind(); }

void ToolServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

// ---------------------------------------------------------------------------

struct RemoteBackend::Impl {
  RemoteOptions options;
  std::counting_semaphore<1024> in_flight;

  explicit Impl(RemoteOptions o)
      : options(std::move(o)), in_flight(std::clamp(options.max_in_flight, 1, 1024)) {}

  httplib::Client client() const {
    httplib::Client cli(options.host, options.port);
    const auto secs = [](std::chrono::milliseconds ms) {
      return std::pair<time_t, time_t>(ms.count() / 1000, (ms.count() % 1000) * 1000);
    };
    const auto [s, us] = secs(options.timeout);
    cli.set_connection_timeout(s, us);
    cli.set_read_timeout(s, us);
    cli.set_write_timeout(s, us);
    return cli;
  }
};

RemoteBackend::RemoteBackend(RemoteOptions options)
    : impl_(std::make_unique<Impl>(std::move(options))) {}

RemoteBackend::~RemoteBackend() = default;

bool RemoteBackend::ping() const {
  auto cli = impl_->client();
  auto res = cli.Get(std::string(kHealthPath));
  return res && res->status == 200;
}

json RemoteBackend::call(const ToolRequest& request) const {
  struct Permit {
    std::counting_semaphore<1024>& sem;
    explicit Permit(std::counting_semaphore<1024>& s) : sem(s) { sem.acquire(); }
    ~Permit() { sem.release(); }
  } permit(impl_->in_flight);

  const std::string path = std::string(kToolPathPrefix) + request.tool;
  const std::string body = encode_request(request).dump();
  const auto& opt = impl_->options;
  std::string last_failure;
  for (int attempt = 0; attempt <= opt.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(opt.backoff * (1 << (attempt - 1)));
    auto cli = impl_->client();
    auto res = cli.Post(path, body, "application/json");
    if (!res) {
      last_failure = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_failure = "HTTP " + std::to_string(res->status);
      continue;
    }
    json reply;
    try {
      reply = json::parse(res->body);
    } catch (const json::parse_error&) {
      throw VplException(VplError::tool_error(request.tool, "malformed response", false));
    }
    if (res->status != 200 || !reply.is_object() || !reply.value("ok", false)) {
      const json err = reply.is_object() && reply.contains("error") && reply["error"].is_object()
                           ? reply["error"]
                           : json::object();
      if (res->status != 200) {
        throw VplException(VplError::tool_error(
            request.tool, "bad request: " + err.value("message", std::to_string(res->status)),
            false));
      }
      throw VplException(decode_error(err, request.tool));
    }
    if (!reply.contains("value")) {
      throw VplException(VplError::tool_error(request.tool, "response lacks a value", false));
    }
    return reply["value"];
  }
  throw VplException(
      VplError::tool_error(request.tool, "backend unreachable: " + last_failure, false));
}

namespace {

ToolRequest image_request(std::string tool, const ImagePatch& image, const ToolConfig& config,
                          json args) {
  ToolRequest r;
  r.tool = std::move(tool);
  r.scene_ref = image.scene_id;
  r.patch = image.box;
  r.args = std::move(args);
  r.config = config;
  return r;
}

template <typename F>
auto decode_value(const std::string& tool, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const WireError& e) {
    throw VplException(VplError::tool_error(tool, std::string("malformed value: ") + e.what(),
                                            false));
  } catch (const json::exception& e) {
    throw VplException(VplError::tool_error(tool, std::string("malformed value: ") + e.what(),
                                            false));
  }
}

}  // namespace

std::vector<ImagePatch> RemoteBackend::find(const ImagePatch& image, std::string_view query,
                                            const ToolConfig& config) const {
  const json v = call(image_request("find", image, config, {{"query", query}}));
  return decode_value("find", [&] {
    if (!v.is_array()) throw WireError("value", "expected an array of boxes");
    std::vector<ImagePatch> out;
    for (const auto& b : v) {
      out.push_back(ImagePatch{image.scene_id, decode_box(b, "value"), std::string(query)});
    }
    return out;
  });
}

bool RemoteBackend::exists(const ImagePatch& image, std::string_view query,
                           const ToolConfig& config) const {
  const json v = call(image_request("exists", image, config, {{"query", query}}));
  return decode_value("exists", [&] { return v.get<bool>(); });
}

bool RemoteBackend::verify_property(const ImagePatch& image, std::string_view noun,
                                    std::string_view attribute,
                                    const ToolConfig& config) const {
  const json v = call(image_request("verify_property", image, config,
                                    {{"noun", noun}, {"attribute", attribute}}));
  return decode_value("verify_property", [&] { return v.get<bool>(); });
}

ImagePatch RemoteBackend::best_image_match(std::span<const ImagePatch> patches,
                                           std::string_view query,
                                           const ToolConfig& config) const {
  if (patches.empty()) {
    throw VplException(VplError::tool_error("best_image_match", "empty patch list", false));
  }
  ToolRequest r;
  r.tool = "best_image_match";
  r.config = config;
  json items = json::array();
  for (const auto& p : patches) {
    items.push_back({{"scene_ref", p.scene_id}, {"patch", encode_box(p.box)}});
  }
  r.args = {{"patches", std::move(items)}, {"query", query}};
  const json v = call(r);
  return decode_value("best_image_match", [&] {
    const BBox box = decode_box(v, "value");
    for (const auto& p : patches) {
      if (p.box == box) return p;
    }
    throw WireError("value", "box is not one of the candidates");
  });
}

std::string RemoteBackend::best_text_match(std::span<const std::string> queries,
                                           const ImagePatch& image,
                                           const ToolConfig& config) const {
  const json v = call(image_request("best_text_match", image, config,
                                    {{"queries", std::vector<std::string>(queries.begin(),
                                                                          queries.end())}}));
  return decode_value("best_text_match", [&] { return v.get<std::string>(); });
}

double RemoteBackend::compute_depth(const ImagePatch& image) const {
  const json v = call(image_request("compute_depth", image, ToolConfig{}, json::object()));
  return decode_value("compute_depth", [&] { return v.get<double>(); });
}

std::string RemoteBackend::simple_query(const ImagePatch& image,
                                        std::string_view question) const {
  const json v =
      call(image_request("simple_query", image, ToolConfig{}, {{"question", question}}));
  return decode_value("simple_query", [&] { return v.get<std::string>(); });
}

std::size_t RemoteBackend::select_answer(std::string_view context,
                                         std::span<const std::string> options) const {
  ToolRequest r;
  r.tool = "select_answer";
  r.args = {{"context", context},
            {"options", std::vector<std::string>(options.begin(), options.end())}};
  const json v = call(r);
  return decode_value("select_answer", [&] {
    const auto idx = v.get<std::int64_t>();
    if (idx < 0 || static_cast<std::size_t>(idx) >= options.size()) {
      throw WireError("value", "option index out of range");
    }
    return static_cast<std::size_t>(idx);
  });
}

}  // namespace vpe::wire
