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

#include <cstdlib>
#include <semaphore>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "vpe/llm.hpp"

namespace vpe::llm {

using json = nlohmann::json;

struct HttpGenerator::Impl {
  HttpGeneratorOptions options;
  std::counting_semaphore<1024> in_flight;

  explicit Impl(HttpGeneratorOptions o)
      : options(std::move(o)), in_flight(std::clamp(options.max_in_flight, 1, 1024)) {}
};

HttpGenerator::HttpGenerator(HttpGeneratorOptions options)
    : impl_(std::make_unique<Impl>(std::move(options))) {}

HttpGenerator::~HttpGenerator() = default;

std::string HttpGenerator::id() const { return "http:" + impl_->options.model; }

std::string HttpGenerator::complete(const Prompt& prompt, const GenerationConfig& config) const {
  const auto& opt = impl_->options;
  impl_->in_flight.acquire();
  struct Release {
    std::counting_semaphore<1024>& s;
    ~Release() { s.release(); }
  } release{impl_->in_flight};

  const std::string body = json{{"prompt", prompt.text},
                                {"temperature", config.temperature},
                                {"seed", config.seed},
                                {"max_tokens", config.max_output_tokens},
                                {"model", opt.model}}
                               .dump();
  httplib::Headers headers;
  if (const char* token = std::getenv(opt.token_env.c_str()); token && *token) {
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }
  const auto secs = opt.timeout.count() / 1000;
  const auto usecs = (opt.timeout.count() % 1000) * 1000;

  std::string last_failure;
  for (int attempt = 0; attempt <= opt.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(opt.backoff * (1 << (attempt - 1)));
    httplib::Client cli(opt.url);
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);
    auto res = cli.Post("/v1/generate", headers, body, "application/json");
    if (!res) {
      last_failure = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500 || res->status == 429) {
      last_failure = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw GeneratorError("generator rejected the request: HTTP " + std::to_string(res->status),
                           false);
    }
    try {
      const json reply = json::parse(res->body);
      return reply.at("code").get<std::string>();
    } catch (const json::exception& e) {
      throw GeneratorError(std::string("malformed generator reply: ") + e.what(), true);
    }
  }
  throw GeneratorError("generator unreachable: " + last_failure, true);
}

}  // namespace vpe::llm
