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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "vpe/lang/interpreter.hpp"
#include "vpe/llm.hpp"
#include "vpe/task.hpp"
#include "vpe/toolkit.hpp"

namespace vpe {

enum class RetryStrategy { Regenerate, SelfDebug };

const char* to_string(RetryStrategy s);
std::optional<RetryStrategy> retry_strategy_from_string(std::string_view s);

struct RetryPolicy {
  int max_trials = 5;
  RetryStrategy strategy = RetryStrategy::Regenerate;
  // When set, trial 1 runs at threshold_schedule[0] and each detector
  // failure moves one step down the schedule.
  bool tune_detection = false;
  std::vector<double> threshold_schedule{0.15, 0.10, 0.05};

  /// max_trials >= 1; schedule nonempty, strictly decreasing, within [0, 1].
  bool valid() const;
};

/// Next schedule position, clamped at the last entry.
std::pair<double, std::size_t> next_threshold(std::span<const double> schedule,
                                              std::size_t position);

/// Everything a run needs besides the query and its media.
struct RunSetup {
  const ToolBackend* backend = nullptr;
  ToolConfig tools;
  ApiVariant api = ApiVariant::Abstract;
  const llm::Generator* generator = nullptr;
  llm::GenerationConfig generation;
  llm::TemplateSet templates;
  lang::ExecutionLimits limits;
  // Keep rendered prompts in the trial records.
  bool keep_prompts = false;
};

struct TrialRecord {
  int trial_index = 0;  // 1-based
  std::string template_id;
  std::uint64_t fingerprint = 0;
  std::string prompt;  // empty unless RunSetup::keep_prompts
  std::string code;
  lang::ExecutionOutcome outcome = lang::ExecutionOutcome::success(lang::Value());
  std::optional<lang::ErrorBucket> bucket;  // set on failure
  double threshold_used = 0;
  std::int64_t seed_used = 0;
};

struct RunResult {
  // The last trial's outcome; on success the value is normalized to the
  // task's result kind.
  lang::ExecutionOutcome final_outcome = lang::ExecutionOutcome::success(lang::Value());
  std::vector<TrialRecord> trials;
  std::optional<int> succeeded_at;
};

/// Generate-execute loop. Trial t uses seed generation.seed + t - 1.
/// Never reads ground truth: success means the program ran and returned a
/// value of the task's result kind.
RunResult run_with_retries(std::string_view query, const lang::ExecutionInput& input,
                           TaskKind kind, std::span<const llm::Ice> ices,
                           const RetryPolicy& policy, const RunSetup& setup);

/// JSON forms used in transcripts.
nlohmann::json value_to_json(const lang::Value& v);
nlohmann::json error_to_json(const lang::VplError& e);
nlohmann::json trial_to_json(const TrialRecord& t);

}  // namespace vpe
