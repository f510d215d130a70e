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

#include <memory>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "unit/helpers.hpp"
#include "vpe/wire.hpp"

using namespace vpe;
using namespace vpe::wire;

namespace {

SceneFixture park() {
  return test::make_scene("park", 300, 240,
                          {test::obj("dog", {100, 120, 180, 200}, 0.12, 4, {"brown"}),
                           test::obj("ball", {20, 200, 40, 220}, 0.8, 5, {"blue"}),
                           test::obj("ball", {260, 200, 280, 220}, 0.7, 5, {"red"})});
}

std::shared_ptr<const FixtureBackend> shared_backend() {
  return std::make_shared<const FixtureBackend>(test::backend_for({park()}));
}

ImagePatch whole() { return full_patch(park()); }

std::vector<BBox> boxes(const std::vector<ImagePatch>& ps) {
  std::vector<BBox> out;
  for (const auto& p : ps) out.push_back(p.box);
  return out;
}

// A server on a free port for the duration of a test.
struct LiveServer {
  std::shared_ptr<const FixtureBackend> backend = shared_backend();
  ToolServer server{backend};
  int port = server.bind("127.0.0.1", 0);
  LiveServer() { server.start(); }
  ~LiveServer() { server.stop(); }

  RemoteOptions options() const {
    RemoteOptions o;
    o.port = port;
    o.backoff = std::chrono::milliseconds(1);
    return o;
  }
};

int free_port() {
  httplib::Server s;
  const int p = s.bind_to_any_port("127.0.0.1");
  return p;
}

}  // namespace

TEST_CASE("request codec round-trips") {
  ToolRequest r;
  r.tool = "find";
  r.scene_ref = "park";
  r.patch = BBox{1, 2, 3, 4};
  r.args = {{"query", "dog"}};
  r.config.detection_threshold = 0.15;
  r.config.strict_find = false;
  const json j = encode_request(r);
  CHECK(j["patch"] == json::array({1.0, 2.0, 3.0, 4.0}));
  const ToolRequest back = decode_request("find", j);
  CHECK(back.scene_ref == "park");
  CHECK(*back.patch == *r.patch);
  CHECK(back.args == r.args);
  CHECK(back.config == r.config);
}

TEST_CASE("malformed requests name the field") {
  auto field = [](const std::string& tool, const json& body) {
    try {
      decode_request(tool, body);
    } catch (const WireError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  CHECK(field("find", json::array()) == "");
  CHECK(field("find", json{{"scene_ref", "p"}, {"patch", {0, 0, 1}}, {"args", json::object()}}) ==
        "patch");
  CHECK(field("find", json{{"scene_ref", "p"},
                           {"patch", {0, 0, 1, 1}},
                           {"args", json::object()},
                           {"config", {{"detection_threshold", 2.0}}}}) ==
        "config.detection_threshold");
}

TEST_CASE("error codec keeps class, tool and retryable flag") {
  const auto e = lang::VplError::tool_error("find", "no detections", true);
  const json j = encode_error(e)["error"];
  CHECK(j["class"] == "ToolError");
  CHECK(j["retryable"] == true);
  const auto back = decode_error(j, "find");
  CHECK(back.tool == "find");
  CHECK(back.retryable);
  CHECK(back.message == e.message);
}

TEST_CASE("handle_request answers and reports tool failures as data") {
  const auto b = shared_backend();
  ToolRequest r;
  r.tool = "find";
  r.scene_ref = "park";
  r.patch = whole().box;
  r.args = {{"query", "ball"}};
  json res = handle_request(*b, r);
  CHECK(res["ok"] == true);
  CHECK(res["value"].size() == 2);

  r.args = {{"query", "dog"}};
  r.config.detection_threshold = 0.15;
  res = handle_request(*b, r);
  CHECK(res["ok"] == false);
  CHECK(res["error"]["class"] == "ToolError");
  CHECK(res["error"]["retryable"] == true);

  r.tool = "teleport";
  CHECK_THROWS_AS(handle_request(*b, r), WireError);

  r.tool = "find";
  r.scene_ref = "";
  try {
    handle_request(*b, r);
    FAIL("expected WireError");
  } catch (const WireError& e) {
    CHECK(e.field() == "scene_ref");
  }
}

TEST_CASE("remote backend matches the in-process backend") {
  LiveServer live;
  RemoteBackend remote(live.options());
  REQUIRE(remote.ping());
  const FixtureBackend& local = *live.backend;
  ToolConfig cfg;

  CHECK(boxes(remote.find(whole(), "ball", cfg)) == boxes(local.find(whole(), "ball", cfg)));
  CHECK(remote.exists(whole(), "dog", cfg) == local.exists(whole(), "dog", cfg));
  CHECK(remote.verify_property(whole(), "ball", "red", cfg));
  const auto balls = local.find(whole(), "ball", cfg);
  CHECK(remote.best_image_match(balls, "red ball", cfg) ==
        local.best_image_match(balls, "red ball", cfg));
  const std::vector<std::string> qs{"a dog", "a red ball"};
  CHECK(remote.best_text_match(qs, balls[1], cfg) == local.best_text_match(qs, balls[1], cfg));
  CHECK(remote.compute_depth(balls[0]) == local.compute_depth(balls[0]));
  CHECK(remote.simple_query(whole(), "what is this?") == local.simple_query(whole(), "what is this?"));
  const std::vector<std::string> opts{"cat", "brown dog"};
  CHECK(remote.select_answer("a brown dog", opts) == 1);

  cfg.detection_threshold = 0.15;
  try {
    remote.find(whole(), "dog", cfg);
    FAIL("expected a ToolError");
  } catch (const lang::VplException& e) {
    CHECK(e.error().tool == "find");
    CHECK(e.error().retryable);
  }
}

TEST_CASE("server responses are byte-identical to handle_request") {
  LiveServer live;
  httplib::Client client("127.0.0.1", live.port);
  const char* queries[] = {"dog", "ball", "cat", "balls"};
  for (double t : {0.05, 0.1, 0.5}) {
    for (const char* q : queries) {
      ToolRequest r;
      r.tool = "find";
      r.scene_ref = "park";
      r.patch = whole().box;
      r.args = {{"query", q}};
      r.config.detection_threshold = t;
      const auto res = client.Post("/v1/tool/find", encode_request(r).dump(), "application/json");
      REQUIRE(res);
      CHECK(res->status == 200);
      CHECK(res->body == handle_request(*live.backend, r).dump());
    }
  }
}

TEST_CASE("server rejects bad requests with 400") {
  LiveServer live;
  httplib::Client client("127.0.0.1", live.port);
  auto res = client.Post("/v1/tool/find", "{not json", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
  CHECK(json::parse(res->body)["error"]["class"] == "BadRequest");

  res = client.Post("/v1/tool/find", R"({"scene_ref": "park", "args": {"query": "dog"}})", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
  CHECK(json::parse(res->body)["error"]["field"] == "patch");

  res = client.Post("/v1/tool/teleport", "{}", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);

  const auto health = client.Get("/healthz");
  REQUIRE(health);
  CHECK(json::parse(health->body)["ok"] == true);
}

TEST_CASE("unreachable server surfaces a non-retryable error") {
  RemoteOptions o;
  o.port = free_port();
  o.max_retries = 2;
  o.backoff = std::chrono::milliseconds(1);
  o.timeout = std::chrono::milliseconds(200);
  RemoteBackend remote(o);
  CHECK_FALSE(remote.ping());
  try {
    remote.find(whole(), "dog", ToolConfig{});
    FAIL("expected a ToolError");
  } catch (const lang::VplException& e) {
    CHECK_FALSE(e.error().retryable);
    CHECK(e.error().message.find("backend unreachable") != std::string::npos);
    CHECK(lang::classify_error(e.error()) == lang::ErrorBucket::Other);
  }
}

TEST_CASE("remote backend tolerates concurrent callers") {
  LiveServer live;
  auto opts = live.options();
  opts.max_in_flight = 2;
  RemoteBackend remote(opts);
  const auto want = boxes(live.backend->find(whole(), "ball", ToolConfig{}));
  std::atomic<int> bad{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 6; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < 10; ++i)
        if (boxes(remote.find(whole(), "ball", ToolConfig{})) != want) ++bad;
    });
  }
  for (auto& t : threads) t.join();
  CHECK(bad == 0);
}
