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

#include "vpe/tools.hpp"

#include <algorithm>
#include <sstream>

#include "vpe/lang/error.hpp"
#include "vpe/text.hpp"

namespace vpe {

using lang::VplError;
using lang::VplException;

void SceneRegistry::add_scene(SceneFixture scene) {
  std::string id = scene.scene_id;
  scenes_.insert_or_assign(std::move(id), std::make_shared<const SceneFixture>(std::move(scene)));
}

void SceneRegistry::add_video(const VideoFixture& video) {
  for (const auto& frame : video.frames) add_scene(frame);
}

std::shared_ptr<const SceneFixture> SceneRegistry::scene(std::string_view scene_id) const {
  auto it = scenes_.find(scene_id);
  return it == scenes_.end() ? nullptr : it->second;
}

std::vector<std::string> SceneRegistry::scene_ids() const {
  std::vector<std::string> ids;
  for (const auto& [id, _] : scenes_) ids.push_back(id);
  return ids;
}

SceneRegistry SceneRegistry::from_directory(const std::filesystem::path& dir) {
  SceneRegistry reg;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".json" || ext == ".jsonl")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    if (is_video_fixture_file(f)) {
      reg.add_video(load_video_fixture(f));
    } else {
      reg.add_scene(load_scene_fixture(f));
    }
  }
  return reg;
}

// ---------------------------------------------------------------------------

const SceneFixture& FixtureBackend::scene_for(const ImagePatch& image,
                                              std::string_view tool) const {
  auto scene = registry_.scene(image.scene_id);
  if (!scene) {
    throw VplException(
        VplError::tool_error(std::string(tool), "unknown scene '" + image.scene_id + "'", false));
  }
  return *scene;
}

std::vector<ImagePatch> FixtureBackend::find(const ImagePatch& image, std::string_view query,
                                             const ToolConfig& config) const {
  const std::string wanted = text::normalize_name(query);
  if (wanted.empty()) {
    throw VplException(VplError::tool_error("find", "empty query", false));
  }
  const SceneFixture& scene = scene_for(image, "find");
  std::vector<const SceneObject*> hits;
  for (const auto& obj : scene.objects) {
    if (text::normalize_name(obj.name) != wanted) continue;
    if (overlap_area(obj.box, image.box) <= 0) continue;
    if (obj.confidence < config.detection_threshold) continue;
    hits.push_back(&obj);
  }
  std::stable_sort(hits.begin(), hits.end(), [](const SceneObject* a, const SceneObject* b) {
    return a->confidence > b->confidence;
  });
  if (hits.empty() && config.strict_find) {
    std::ostringstream msg;
    msg << "no detections of '" << query << "' above threshold " << config.detection_threshold;
    throw VplException(VplError::tool_error("find", msg.str(), true));
  }
  std::vector<ImagePatch> out;
  out.reserve(hits.size());
  for (const auto* obj : hits) {
    out.push_back(ImagePatch{image.scene_id, clip(obj->box, image.box), obj->name});
  }
  return out;
}

bool FixtureBackend::exists(const ImagePatch& image, std::string_view query,
                            const ToolConfig& config) const {
  ToolConfig lenient = config;
  lenient.strict_find = false;
  return !find(image, query, lenient).empty();
}

bool FixtureBackend::verify_property(const ImagePatch& image, std::string_view noun,
                                     std::string_view attribute,
                                     const ToolConfig& config) const {
  const std::string wanted_name = text::normalize_name(noun);
  const std::string wanted_attr = text::normalize(attribute);
  if (wanted_name.empty() || wanted_attr.empty()) return false;
  const SceneFixture& scene = scene_for(image, "verify_property");
  for (const auto& obj : scene.objects) {
    if (text::normalize_name(obj.name) != wanted_name) continue;
    if (overlap_area(obj.box, image.box) <= 0) continue;
    if (obj.confidence < config.detection_threshold) continue;
    for (const auto& a : obj.attributes) {
      if (text::normalize(a) == wanted_attr) return true;
    }
  }
  return false;
}

std::string FixtureBackend::describe(const ImagePatch& image) const {
  auto scene = registry_.scene(image.scene_id);
  if (!scene) return {};
  const SceneObject* best = nullptr;
  double best_iou = 0;
  for (const auto& obj : scene->objects) {
    if (overlap_area(obj.box, image.box) <= 0) continue;
    const double v = iou(obj.box, image.box);
    if (!best || v > best_iou) {
      best = &obj;
      best_iou = v;
    }
  }
  return best ? best->description() : std::string();
}

ImagePatch FixtureBackend::best_image_match(std::span<const ImagePatch> patches,
                                            std::string_view query, const ToolConfig&) const {
  if (patches.empty()) {
    throw VplException(VplError::tool_error("best_image_match", "empty patch list", false));
  }
  std::vector<std::string> descriptions;
  descriptions.reserve(patches.size());
  for (const auto& p : patches) {
    (void)scene_for(p, "best_image_match");
    descriptions.push_back(describe(p));
  }
  return patches[text::best_overlap_index(descriptions, query)];
}

std::string FixtureBackend::best_text_match(std::span<const std::string> queries,
                                            const ImagePatch& image, const ToolConfig&) const {
  if (queries.empty()) {
    throw VplException(VplError::tool_error("best_text_match", "empty query list", false));
  }
  (void)scene_for(image, "best_text_match");
  const std::vector<std::string> candidates(queries.begin(), queries.end());
  return candidates[text::best_overlap_index(candidates, describe(image))];
}

double weighted_median_depth(std::vector<std::pair<double, double>> depth_weights,
                             double fallback) {
  double total = 0;
  for (const auto& [_, w] : depth_weights) total += w;
  if (total <= 0) return fallback;
  std::stable_sort(depth_weights.begin(), depth_weights.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  double cumulative = 0;
  for (const auto& [d, w] : depth_weights) {
    cumulative += w;
    if (cumulative * 2 >= total) return d;
  }
  return depth_weights.back().first;
}

double FixtureBackend::compute_depth(const ImagePatch& image) const {
  const SceneFixture& scene = scene_for(image, "compute_depth");
  std::vector<std::pair<double, double>> weights;
  for (const auto& obj : scene.objects) {
    const double a = overlap_area(obj.box, image.box);
    if (a > 0) weights.emplace_back(obj.depth, a);
  }
  return weighted_median_depth(std::move(weights), scene.background_depth);
}

std::string FixtureBackend::simple_query(const ImagePatch& image,
                                         std::string_view question) const {
  return scene_for(image, "simple_query").answer(question);
}

std::size_t FixtureBackend::select_answer(std::string_view context,
                                          std::span<const std::string> options) const {
  if (options.empty()) {
    throw VplException(VplError::tool_error("select_answer", "empty option list", false));
  }
  const std::vector<std::string> candidates(options.begin(), options.end());
  return text::best_overlap_index(candidates, context);
}

}  // namespace vpe
