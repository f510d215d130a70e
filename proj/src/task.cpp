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

#include "vpe/task.hpp"

namespace vpe {

const char* to_string(TaskKind k) {
  switch (k) {
    case TaskKind::Grounding: return "grounding";
    case TaskKind::Vqa: return "vqa";
    case TaskKind::VideoMcq: return "video_mcq";
  }
  return "?";
}

std::optional<TaskKind> task_kind_from_string(std::string_view s) {
  if (s == "grounding") return TaskKind::Grounding;
  if (s == "vqa") return TaskKind::Vqa;
  if (s == "video_mcq") return TaskKind::VideoMcq;
  return std::nullopt;
}

}  // namespace vpe
