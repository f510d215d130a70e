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

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vpe/scene.hpp"

namespace vpe {

struct ToolConfig {
  double detection_threshold = 0.1;
  double text_match_threshold = 0.5;
  // An empty detection raises a retryable ToolError instead of returning [].
  bool strict_find = true;

  bool valid() const {
    return detection_threshold >= 0 && detection_threshold <= 1 &&
           text_match_threshold >= 0 && text_match_threshold <= 1;
  }
  friend bool operator==(const ToolConfig&, const ToolConfig&) = default;
};

/// The vision tools a program can call. Failures are raised as
/// `lang::VplException` carrying a ToolError.
class ToolBackend {
 public:
  virtual ~ToolBackend() = default;

  virtual std::string_view kind() const = 0;

  virtual std::vector<ImagePatch> find(const ImagePatch& image, std::string_view query,
                                       const ToolConfig& config) const = 0;
  virtual bool exists(const ImagePatch& image, std::string_view query,
                      const ToolConfig& config) const = 0;
  virtual bool verify_property(const ImagePatch& image, std::string_view noun,
                               std::string_view attribute,
                               const ToolConfig& config) const = 0;
  virtual ImagePatch best_image_match(std::span<const ImagePatch> patches,
                                      std::string_view query,
                                      const ToolConfig& config) const = 0;
  virtual std::string best_text_match(std::span<const std::string> queries,
                                      const ImagePatch& image,
                                      const ToolConfig& config) const = 0;
  virtual double compute_depth(const ImagePatch& image) const = 0;
  virtual std::string simple_query(const ImagePatch& image,
                                   std::string_view question) const = 0;
  virtual std::size_t select_answer(std::string_view context,
                                    std::span<const std::string> options) const = 0;
};

/// Scenes addressable by id. Video frames register under their own
/// scene ids.
class SceneRegistry {
 public:
  void add_scene(SceneFixture scene);
  void add_video(const VideoFixture& video);

  /// Null when unknown.
  std::shared_ptr<const SceneFixture> scene(std::string_view scene_id) const;
  std::vector<std::string> scene_ids() const;

  /// Loads every *.json / *.jsonl fixture under `dir` (non-recursive).
  static SceneRegistry from_directory(const std::filesystem::path& dir);

 private:
  std::map<std::string, std::shared_ptr<const SceneFixture>, std::less<>> scenes_;
};

/// Deterministic backend answering from ground-truth scene graphs. Pure:
/// results depend only on (scene, arguments, config).
class FixtureBackend final : public ToolBackend {
 public:
  explicit FixtureBackend(SceneRegistry registry) : registry_(std::move(registry)) {}

  std::string_view kind() const override { return "fixture"; }
  const SceneRegistry& registry() const { return registry_; }

  std::vector<ImagePatch> find(const ImagePatch& image, std::string_view query,
                               const ToolConfig& config) const override;
  bool exists(const ImagePatch& image, std::string_view query,
              const ToolConfig& config) const override;
  bool verify_property(const ImagePatch& image, std::string_view noun,
                       std::string_view attribute, const ToolConfig& config) const override;
  ImagePatch best_image_match(std::span<const ImagePatch> patches, std::string_view query,
                              const ToolConfig& config) const override;
  std::string best_text_match(std::span<const std::string> queries, const ImagePatch& image,
                              const ToolConfig& config) const override;
  double compute_depth(const ImagePatch& image) const override;
  std::string simple_query(const ImagePatch& image, std::string_view question) const override;
  std::size_t select_answer(std::string_view context,
                            std::span<const std::string> options) const override;

  /// Text a matcher sees for a patch: the description of the object with
  /// the highest IoU against the patch, or empty when nothing overlaps.
  std::string describe(const ImagePatch& image) const;

 private:
  const SceneFixture& scene_for(const ImagePatch& image, std::string_view tool) const;

  SceneRegistry registry_;
};

/// Area-weighted lower median of (depth, weight) pairs; `fallback` when the
/// total weight is zero.
double weighted_median_depth(std::vector<std::pair<double, double>> depth_weights,
                             double fallback);

}  // namespace vpe
