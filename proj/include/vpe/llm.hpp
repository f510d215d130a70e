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
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vpe/lang/error.hpp"
#include "vpe/toolkit.hpp"

namespace vpe::llm {

inline constexpr std::string_view kDefaultTemplate = "default";
inline constexpr std::string_view kDebugTemplate = "debug";

/// API listing shown to the code generator.
std::string_view api_text(ApiVariant variant);

/// Function names declared (`def name(`) in an API listing.
std::vector<std::string> declared_functions(std::string_view api_text);

/// In-context example: a query and the program that answers it.
struct Ice {
  std::string query;
  std::string code;
  friend bool operator==(const Ice&, const Ice&) = default;
};

/// Named prompt templates with `{API}`, `{ICES}`, `{QUERY}`, `{OPTIONS}`,
/// `{PREV_CODE}` and `{ERROR}` placeholders.
class TemplateSet {
 public:
  /// The built-in `default` and `debug` templates.
  TemplateSet();

  /// Built-ins overridden by `<id>.txt` files in `dir`: prompt_default.txt
  /// and prompt_debug.txt.
  static TemplateSet from_directory(const std::filesystem::path& dir);

  const std::string& get(std::string_view id) const;
  void set(std::string id, std::string text);

 private:
  std::unordered_map<std::string, std::string> templates_;
};

/// Single-pass placeholder substitution; unknown `{...}` stay literal and
/// substituted text is never rescanned.
std::string render_template(std::string_view tmpl,
                            std::span<const std::pair<std::string_view, std::string_view>> vars);

std::string render_ices(std::span<const Ice> ices);
std::string render_options(std::span<const std::string> options);

/// A rendered prompt plus the fields the mock generator keys on.
struct Prompt {
  std::string template_id;
  std::string text;
  std::string query;
  std::size_t ice_count = 0;
};

Prompt assemble_prompt(std::string_view api_text, std::span<const Ice> ices,
                       std::string_view query, std::span<const std::string> options = {},
                       const TemplateSet& templates = TemplateSet());

/// Feedback prompt for self-debugging. Carries the previous program and its
/// error, never a label.
Prompt assemble_debug_prompt(std::string_view api_text, std::string_view query,
                             std::string_view previous_code, const lang::VplError& error,
                             std::span<const std::string> options = {},
                             const TemplateSet& templates = TemplateSet());

struct GenerationConfig {
  double temperature = 0.4;
  std::int64_t seed = 0;
  int max_output_tokens = 512;

  bool valid() const { return temperature >= 0 && max_output_tokens > 0; }
};

/// Stable 64-bit FNV-1a hash of (template id, query, ICE count, seed).
std::uint64_t prompt_fingerprint(std::string_view template_id, std::string_view query,
                                 std::size_t ice_count, std::int64_t seed);

/// Generation failure. Retryable failures (transport) consume a trial;
/// non-retryable ones indicate misconfiguration.
class GeneratorError : public std::runtime_error {
 public:
  GeneratorError(const std::string& message, bool retryable)
      : std::runtime_error(message), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

class Generator {
 public:
  virtual ~Generator() = default;
  /// Identifier recorded in ACE stores and reports.
  virtual std::string id() const = 0;
  /// Raw model output. Must tolerate concurrent calls.
  virtual std::string complete(const Prompt& prompt, const GenerationConfig& config) const = 0;
};

/// Removes markdown fences and leading prose from a model reply.
std::string extract_code(std::string_view reply);

/// `complete` followed by `extract_code`.
std::string generate_code(const Generator& generator, const Prompt& prompt,
                          const GenerationConfig& config);

/// Scripted generator. Rules match on (template, query, ICE count, seed);
/// concrete rules are looked up by fingerprint, wildcard rules are tried in
/// file order, then the default response.
///
/// Script format:
///   {"id": "...", "default": "code"?,
///    "rules": [{"query": "...", "code": "...", "template": "default"|"debug"|"*",
///               "ices": n|"*"|"+", "seed": n|"*"}]}
/// Omitted matcher fields default to "*"; "+" matches any nonzero count.
class MockGenerator final : public Generator {
 public:
  struct Rule {
    std::string query;
    std::string code;
    std::optional<std::string> template_id;  // nullopt = any
    std::optional<std::size_t> ices;         // nullopt = any
    bool ices_nonzero = false;
    std::optional<std::int64_t> seed;        // nullopt = any
  };

  explicit MockGenerator(std::string id = "mock") : id_(std::move(id)) {}

  static MockGenerator from_json(std::string_view json_text);
  static MockGenerator load(const std::filesystem::path& path);

  void add_rule(Rule rule);
  void set_default(std::string code) { default_ = std::move(code); }

  std::string id() const override { return id_; }
  std::string complete(const Prompt& prompt, const GenerationConfig& config) const override;

 private:
  std::string id_;
  std::unordered_map<std::uint64_t, std::string> exact_;
  std::vector<Rule> wildcard_;
  std::optional<std::string> default_;
};

struct HttpGeneratorOptions {
  std::string url = "http://127.0.0.1:8091";
  std::string model = "code-model";
  std::string token_env = "VPE_GENERATOR_TOKEN";
  std::chrono::milliseconds timeout{60'000};
  int max_in_flight = 4;
  int max_retries = 3;
  std::chrono::milliseconds backoff{200};
};

/// Client for `POST /v1/generate` {prompt, temperature, seed, max_tokens}
/// -> {code}. Sends `Authorization: Bearer $token_env` when the variable is
/// set.
class HttpGenerator final : public Generator {
 public:
  explicit HttpGenerator(HttpGeneratorOptions options);
  ~HttpGenerator() override;

  std::string id() const override;
  std::string complete(const Prompt& prompt, const GenerationConfig& config) const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vpe::llm
