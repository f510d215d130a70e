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
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "vpe/lang/interpreter.hpp"
#include "vpe/task.hpp"
#include "vpe/tools.hpp"

namespace vpe {

/// Box for grounding, answer text for vqa, option index for video_mcq.
using GroundTruth = std::variant<BBox, std::string, std::int64_t>;

struct LabeledExample {
  std::string id;
  TaskKind kind = TaskKind::Grounding;
  std::string scene;  // fixture path as written in the dataset
  std::string query;
  GroundTruth ground_truth;
  std::vector<std::string> options;

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

/// Dataset schema violation; `line()` is 1-based.
class DatasetError : public std::runtime_error {
 public:
  DatasetError(int line, std::string detail, const std::string& file = {});
  int line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  int line_;
  std::string detail_;
};

/// Parses dataset JSONL, one example per line:
///   {"id", "task_kind", "scene", "query", "gt_box"?, "gt_answer"?,
///    "options"?, "gt_index"?}
/// Blank lines are skipped. Every line must match `kind` when given.
std::vector<LabeledExample> parse_dataset(std::string_view jsonl,
                                          std::optional<TaskKind> kind = std::nullopt);
std::vector<LabeledExample> load_dataset(const std::filesystem::path& path,
                                         std::optional<TaskKind> kind = std::nullopt);
std::string serialize_example(const LabeledExample& e);
std::string serialize_dataset(std::span<const LabeledExample> examples);

/// Fixtures referenced by a dataset, loaded once and shared.
class MediaLibrary {
 public:
  /// Loads every fixture the examples reference; relative paths resolve
  /// against `base_dir`. Throws FixtureError or std::runtime_error naming
  /// the path.
  static MediaLibrary load(std::span<const LabeledExample> examples,
                           const std::filesystem::path& base_dir);

  /// Scenes for the fixture backend, video frames included.
  const SceneRegistry& registry() const { return registry_; }

  /// Media bound to the program, plus the example's question and options.
  lang::ExecutionInput input_for(const LabeledExample& e) const;

  void add_scene(const std::string& ref, SceneFixture scene);
  void add_video(const std::string& ref, VideoFixture video);

 private:
  SceneRegistry registry_;
  std::map<std::string, ImagePatch> images_;
  std::map<std::string, std::shared_ptr<const VideoFixture>> videos_;
};

/// Score in [0, 1]: IoU for grounding, normalized exact match for vqa,
/// index equality for video_mcq; 0 for any failed outcome.
double score_program(const lang::ExecutionOutcome& outcome, const GroundTruth& gt, TaskKind kind,
                     std::span<const std::string> options = {});

}  // namespace vpe
