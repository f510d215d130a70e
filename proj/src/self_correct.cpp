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

#include "vpe/self_correct.hpp"

#include <algorithm>

namespace vpe {

using json = nlohmann::json;
using lang::ExecutionOutcome;
using lang::Value;
using lang::VplError;

const char* to_string(RetryStrategy s) {
  return s == RetryStrategy::SelfDebug ? "self_debug" : "regenerate";
}

std::optional<RetryStrategy> retry_strategy_from_string(std::string_view s) {
  if (s == "regenerate") return RetryStrategy::Regenerate;
  if (s == "self_debug") return RetryStrategy::SelfDebug;
  return std::nullopt;
}

bool RetryPolicy::valid() const {
  if (max_trials < 1 || threshold_schedule.empty()) return false;
  for (std::size_t i = 0; i < threshold_schedule.size(); ++i) {
    const double t = threshold_schedule[i];
    if (!(t >= 0 && t <= 1)) return false;
    if (i > 0 && !(t < threshold_schedule[i - 1])) return false;
  }
  return true;
}

std::pair<double, std::size_t> next_threshold(std::span<const double> schedule,
                                              std::size_t position) {
  const std::size_t next = std::min(position + 1, schedule.size() - 1);
  return {schedule[next], next};
}

RunResult run_with_retries(std::string_view query, const lang::ExecutionInput& input,
                           TaskKind kind, std::span<const llm::Ice> ices,
                           const RetryPolicy& policy, const RunSetup& setup) {
  const std::string_view api = llm::api_text(setup.api);
  lang::ExecutionInput exec_input = input;
  exec_input.expected_kind = lang::expected_kind_name(kind);

  std::size_t position = 0;
  double threshold =
      policy.tune_detection ? policy.threshold_schedule.front() : setup.tools.detection_threshold;

  RunResult result;
  for (int t = 1; t <= policy.max_trials; ++t) {
    TrialRecord rec;
    rec.trial_index = t;
    rec.threshold_used = threshold;
    rec.seed_used = setup.generation.seed + t - 1;

    const bool debug = policy.strategy == RetryStrategy::SelfDebug && !result.trials.empty();
    const llm::Prompt prompt =
        debug ? llm::assemble_debug_prompt(api, query, result.trials.back().code,
                                           result.trials.back().outcome.error(), input.options,
                                           setup.templates)
              : llm::assemble_prompt(api, ices, query, input.options, setup.templates);
    rec.template_id = prompt.template_id;
    rec.fingerprint =
        llm::prompt_fingerprint(prompt.template_id, query, prompt.ice_count, rec.seed_used);
    if (setup.keep_prompts) rec.prompt = prompt.text;

    llm::GenerationConfig gen = setup.generation;
    gen.seed = rec.seed_used;
    bool generated = false;
    try {
      rec.code = llm::generate_code(*setup.generator, prompt, gen);
      generated = true;
    } catch (const llm::GeneratorError& e) {
      rec.outcome = ExecutionOutcome::failure(
          VplError::tool_error("generator", e.what(), e.retryable()));
    }

    if (generated) {
      ToolConfig tools = setup.tools;
      tools.detection_threshold = threshold;
      const auto table = make_dispatch_table(*setup.backend, tools, setup.api);
      rec.outcome = lang::run_source(rec.code, exec_input, table, setup.limits);
      if (rec.outcome.ok()) {
        auto checked = lang::check_return_type(rec.outcome.value(), kind, input.options);
        rec.outcome = std::holds_alternative<Value>(checked)
                          ? ExecutionOutcome::success(std::get<Value>(std::move(checked)))
                          : ExecutionOutcome::failure(std::get<VplError>(std::move(checked)));
      }
    }

    const bool ok = rec.outcome.ok();
    if (!ok) rec.bucket = lang::classify_error(rec.outcome.error());
    const bool detector_failed = rec.bucket == lang::ErrorBucket::ObjDet;
    result.trials.push_back(std::move(rec));
    if (ok) {
      result.succeeded_at = t;
      break;
    }
    if (detector_failed && policy.tune_detection) {
      std::tie(threshold, position) = next_threshold(policy.threshold_schedule, position);
    }
  }
  result.final_outcome = result.trials.back().outcome;
  return result;
}

// ---------------------------------------------------------------------------

json value_to_json(const Value& v) {
  return std::visit(
      [&](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, lang::NoneValue>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, bool> || std::is_same_v<T, std::int64_t> ||
                             std::is_same_v<T, double> || std::is_same_v<T, std::string>) {
          return x;
        } else if constexpr (std::is_same_v<T, lang::ListPtr>) {
          json arr = json::array();
          for (const auto& item : *x) arr.push_back(value_to_json(item));
          return arr;
        } else if constexpr (std::is_same_v<T, lang::RangeValue>) {
          return json{{"range", {x.start, x.stop, x.step}}};
        } else if constexpr (std::is_same_v<T, ImagePatch>) {
          return json{{"scene_id", x.scene_id}, {"box", x.box.as_array()}};
        } else {
          return json{{"video_id", x.video_id()},
                      {"start_frame", x.start_frame()},
                      {"end_frame", x.end_frame()}};
        }
      },
      v.data());
}

json error_to_json(const VplError& e) {
  json j{{"class", lang::to_string(e.cls)}, {"message", e.message}};
  if (e.span) {
    j["line"] = e.span->line;
    j["column"] = e.span->column;
  }
  if (e.cls == lang::ErrorClass::ToolError) {
    j["tool"] = e.tool;
    j["retryable"] = e.retryable;
  }
  if (e.cls == lang::ErrorClass::ReturnTypeError) {
    j["expected"] = e.expected;
    j["actual"] = e.actual;
  }
  return j;
}

json trial_to_json(const TrialRecord& t) {
  char fp[17];
  std::snprintf(fp, sizeof fp, "%016llx", static_cast<unsigned long long>(t.fingerprint));
  json j{{"trial_index", t.trial_index},
         {"template_id", t.template_id},
         {"fingerprint", fp},
         {"seed_used", t.seed_used},
         {"threshold_used", t.threshold_used},
         {"code", t.code},
         {"ok", t.outcome.ok()}};
  if (!t.prompt.empty()) j["prompt"] = t.prompt;
  if (t.outcome.ok()) {
    j["value"] = value_to_json(t.outcome.value());
  } else {
    j["error"] = error_to_json(t.outcome.error());
    j["bucket"] = lang::to_string(*t.bucket);
  }
  return j;
}

}  // namespace vpe
