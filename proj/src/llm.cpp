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

#include "vpe/llm.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include "embedded_templates.hpp"
#include "json.hpp"

namespace vpe::llm {

using json = nlohmann::json;

std::string_view api_text(ApiVariant variant) {
  return variant == ApiVariant::Abstract ? detail::kApiAbstract : detail::kApiViperGptStyle;
}

std::vector<std::string> declared_functions(std::string_view api) {
  static const std::regex def_re(R"(^def\s+([A-Za-z_][A-Za-z0-9_]*)\s*\()",
                                 std::regex::multiline);
  std::vector<std::string> names;
  const std::string s(api);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), def_re); it != std::sregex_iterator();
       ++it) {
    names.push_back((*it)[1].str());
  }
  return names;
}

// ---------------------------------------------------------------------------

TemplateSet::TemplateSet() {
  templates_.emplace(kDefaultTemplate, detail::kPromptDefault);
  templates_.emplace(kDebugTemplate, detail::kPromptDebug);
}

TemplateSet TemplateSet::from_directory(const std::filesystem::path& dir) {
  TemplateSet set;
  for (std::string_view id : {kDefaultTemplate, kDebugTemplate}) {
    const auto path = dir / ("prompt_" + std::string(id) + ".txt");
    if (!std::filesystem::exists(path)) continue;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read template " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    set.set(std::string(id), buf.str());
  }
  return set;
}

const std::string& TemplateSet::get(std::string_view id) const {
  auto it = templates_.find(std::string(id));
  if (it == templates_.end()) throw std::invalid_argument("unknown template '" + std::string(id) + "'");
  return it->second;
}

void TemplateSet::set(std::string id, std::string text) {
  templates_.insert_or_assign(std::move(id), std::move(text));
}

std::string render_template(std::string_view tmpl,
                            std::span<const std::pair<std::string_view, std::string_view>> vars) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const auto close = tmpl.find('}', i + 1);
      if (close != std::string_view::npos) {
        const auto key = tmpl.substr(i + 1, close - i - 1);
        bool replaced = false;
        for (const auto& [name, value] : vars) {
          if (name == key) {
            out += value;
            replaced = true;
            break;
          }
        }
        if (replaced) {
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(tmpl[i++]);
  }
  return out;
}

std::string render_ices(std::span<const Ice> ices) {
  std::string out;
  for (const auto& ice : ices) {
    out += "Query: " + ice.query + "\nProgram:\n" + ice.code;
    if (ice.code.empty() || ice.code.back() != '\n') out += '\n';
    out += '\n';
  }
  return out;
}

std::string render_options(std::span<const std::string> options) {
  if (options.empty()) return {};
  std::string out = "Possible answers:\n";
  for (std::size_t i = 0; i < options.size(); ++i) {
    out += std::to_string(i) + ": " + options[i] + "\n";
  }
  return out;
}

Prompt assemble_prompt(std::string_view api, std::span<const Ice> ices, std::string_view query,
                       std::span<const std::string> options, const TemplateSet& templates) {
  const std::string ice_text = render_ices(ices);
  const std::string option_text = render_options(options);
  const std::pair<std::string_view, std::string_view> vars[] = {
      {"API", api}, {"ICES", ice_text}, {"QUERY", query}, {"OPTIONS", option_text}};
  return Prompt{std::string(kDefaultTemplate),
                render_template(templates.get(kDefaultTemplate), vars), std::string(query),
                ices.size()};
}

Prompt assemble_debug_prompt(std::string_view api, std::string_view query,
                             std::string_view previous_code, const lang::VplError& error,
                             std::span<const std::string> options, const TemplateSet& templates) {
  const std::string option_text = render_options(options);
  const std::string error_text = error.describe();
  const std::pair<std::string_view, std::string_view> vars[] = {
      {"API", api},
      {"QUERY", query},
      {"OPTIONS", option_text},
      {"PREV_CODE", previous_code},
      {"ERROR", error_text}};
  return Prompt{std::string(kDebugTemplate), render_template(templates.get(kDebugTemplate), vars),
                std::string(query), 0};
}

std::uint64_t prompt_fingerprint(std::string_view template_id, std::string_view query,
                                 std::size_t ice_count, std::int64_t seed) {
  std::uint64_t h = 14695981039346656037ull;
  const auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;  // field separator outside the UTF-8 byte range
    h *= 1099511628211ull;
  };
  mix(template_id);
  mix(query);
  mix(std::to_string(ice_count));
  mix(std::to_string(seed));
  return h;
}

// ---------------------------------------------------------------------------

std::string extract_code(std::string_view reply) {
  std::string body;
  if (const auto fence = reply.find("```"); fence != std::string_view::npos) {
    auto start = reply.find('\n', fence);
    start = start == std::string_view::npos ? reply.size() : start + 1;
    const auto end = reply.find("```", start);
    body = std::string(reply.substr(start, end == std::string_view::npos ? reply.npos : end - start));
  } else {
    static const std::regex code_start(
        R"(^\s*(def\s|return\b|if\b|for\b|pass\b|#|[A-Za-z_][A-Za-z0-9_]*\s*(=|\(|\.|\[|[-+*/%]=)))");
    std::istringstream in{std::string(reply)};
    std::string line;
    bool started = false;
    while (std::getline(in, line)) {
      if (!started && !std::regex_search(line, code_start)) continue;
      started = true;
      body += line;
      body += '\n';
    }
    if (!started) body = std::string(reply);
  }
  while (!body.empty() && (body.back() == '\n' || body.back() == ' ' || body.back() == '\t' ||
                           body.back() == '\r')) {
    body.pop_back();
  }
  return body.empty() ? body : body + "\n";
}

std::string generate_code(const Generator& generator, const Prompt& prompt,
                          const GenerationConfig& config) {
  return extract_code(generator.complete(prompt, config));
}

// ---------------------------------------------------------------------------

void MockGenerator::add_rule(Rule rule) {
  if (rule.template_id && rule.ices && !rule.ices_nonzero && rule.seed) {
    const auto fp = prompt_fingerprint(*rule.template_id, rule.query, *rule.ices, *rule.seed);
    exact_.emplace(fp, std::move(rule.code));
    return;
  }
  wildcard_.push_back(std::move(rule));
}

std::string MockGenerator::complete(const Prompt& prompt, const GenerationConfig& config) const {
  const auto fp = prompt_fingerprint(prompt.template_id, prompt.query, prompt.ice_count, config.seed);
  if (auto it = exact_.find(fp); it != exact_.end()) return it->second;
  for (const auto& r : wildcard_) {
    if (r.query != prompt.query) continue;
    if (r.template_id && *r.template_id != prompt.template_id) continue;
    if (r.ices_nonzero && prompt.ice_count == 0) continue;
    if (r.ices && *r.ices != prompt.ice_count) continue;
    if (r.seed && *r.seed != config.seed) continue;
    return r.code;
  }
  if (default_) return *default_;
  throw GeneratorError("mock generator has no response for query '" + prompt.query +
                           "' (template " + prompt.template_id + ", " +
                           std::to_string(prompt.ice_count) + " ICEs, seed " +
                           std::to_string(config.seed) + ")",
                       false);
}

MockGenerator MockGenerator::from_json(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("mock script: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("mock script: expected an object");
  MockGenerator gen(j.value("id", std::string("mock")));
  if (auto it = j.find("default"); it != j.end()) {
    if (!it->is_string()) throw std::invalid_argument("mock script: default must be a string");
    gen.set_default(it->get<std::string>());
  }
  const json rules = j.value("rules", json::array());
  if (!rules.is_array()) throw std::invalid_argument("mock script: rules must be an array");
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const json& r = rules[i];
    const std::string where = "mock script: rules[" + std::to_string(i) + "]";
    if (!r.is_object() || !r.contains("query") || !r["query"].is_string() ||
        !r.contains("code") || !r["code"].is_string()) {
      throw std::invalid_argument(where + " needs string fields query and code");
    }
    Rule rule;
    rule.query = r["query"].get<std::string>();
    rule.code = r["code"].get<std::string>();
    if (auto t = r.find("template"); t != r.end() && *t != "*") {
      if (!t->is_string()) throw std::invalid_argument(where + ".template must be a string");
      rule.template_id = t->get<std::string>();
    }
    if (auto n = r.find("ices"); n != r.end() && *n != "*") {
      if (*n == "+") {
        rule.ices_nonzero = true;
      } else if (n->is_number_unsigned()) {
        rule.ices = n->get<std::size_t>();
      } else {
        throw std::invalid_argument(where + ".ices must be a count, \"*\" or \"+\"");
      }
    }
    if (auto s = r.find("seed"); s != r.end() && *s != "*") {
      if (!s->is_number_integer()) throw std::invalid_argument(where + ".seed must be an integer");
      rule.seed = s->get<std::int64_t>();
    }
    gen.add_rule(std::move(rule));
  }
  return gen;
}

MockGenerator MockGenerator::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read mock script " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

}  // namespace vpe::llm
