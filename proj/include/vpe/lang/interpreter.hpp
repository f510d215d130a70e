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
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vpe/lang/ast.hpp"
#include "vpe/lang/dispatch.hpp"
#include "vpe/lang/error.hpp"
#include "vpe/lang/value.hpp"
#include "vpe/task.hpp"

namespace vpe::lang {

struct ExecutionLimits {
  std::int64_t max_steps = 100'000;
  std::int64_t max_loop_iterations = 10'000;
  std::int64_t max_collection_length = 10'000;
  std::chrono::milliseconds wall_clock{30'000};

  bool valid() const {
    return max_steps > 0 && max_loop_iterations > 0 && max_collection_length > 0 &&
           wall_clock.count() > 0;
  }
};

/// What a program runs against. Bare scripts see the media as `image` or
/// `video`, plus `question` and (when present) `possible_answers`; the
/// wrapper form receives the same values positionally.
struct ExecutionInput {
  std::variant<ImagePatch, VideoSegment> media;
  std::string question;
  std::vector<std::string> options;
  // Expected result kind, named in the error when the program never returns.
  std::string expected_kind = "value";
};

class ExecutionOutcome {
 public:
  static ExecutionOutcome success(Value v) { return ExecutionOutcome(std::move(v)); }
  static ExecutionOutcome failure(VplError e) { return ExecutionOutcome(std::move(e)); }

  bool ok() const { return std::holds_alternative<Value>(data_); }
  const Value& value() const { return std::get<Value>(data_); }
  const VplError& error() const { return std::get<VplError>(data_); }

 private:
  explicit ExecutionOutcome(Value v) : data_(std::move(v)) {}
  explicit ExecutionOutcome(VplError e) : data_(std::move(e)) {}
  std::variant<Value, VplError> data_;
};

/// Names callable without the dispatch table.
std::span<const std::string_view> builtin_names();

/// Runs a parsed program to completion or to the first error. Deterministic
/// given deterministic tools. Never throws.
ExecutionOutcome execute(const Program& program, const ExecutionInput& input,
                         const DispatchTable& tools, const ExecutionLimits& limits);

/// Parse + execute; parse failures come back as ParseError outcomes.
ExecutionOutcome run_source(std::string_view source, const ExecutionInput& input,
                            const DispatchTable& tools, const ExecutionLimits& limits);

/// Validates a returned value against the task's expected result kind and
/// normalizes it: grounding -> a single patch (a one-element patch list is
/// unwrapped), vqa -> text (numbers stringified, booleans as yes/no),
/// video_mcq -> option index (an option's text maps to its index).
std::variant<Value, VplError> check_return_type(const Value& value, TaskKind kind,
                                                std::span<const std::string> options = {});

/// Human-readable name of the result kind a task expects.
std::string expected_kind_name(TaskKind kind);

}  // namespace vpe::lang
