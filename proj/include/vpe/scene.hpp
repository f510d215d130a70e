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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vpe/geometry.hpp"

namespace vpe {

struct SceneObject {
  std::string name;
  BBox box;
  std::vector<std::string> attributes;
  double depth = 0;  // smaller = closer to the camera
  double confidence = 1;

  /// Name followed by attributes, the text a matcher sees for this object.
  std::string description() const;

  friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

/// Ground-truth scene graph that stands in for a real image.
struct SceneFixture {
  std::string scene_id;
  int width = 0;
  int height = 0;
  double background_depth = 0;
  std::string caption;
  std::map<std::string, std::string> qa;
  std::vector<SceneObject> objects;

  BBox bounds() const {
    return {0, 0, static_cast<double>(width), static_cast<double>(height)};
  }

  /// Answer for `question` after normalization, or the caption on a miss.
  std::string answer(std::string_view question) const;

  friend bool operator==(const SceneFixture&, const SceneFixture&) = default;
};

struct VideoEvent {
  std::string text;
  int start = 0;
  int end = 0;

  friend bool operator==(const VideoEvent&, const VideoEvent&) = default;
};

struct VideoFixture {
  std::string video_id;
  std::vector<SceneFixture> frames;
  std::vector<VideoEvent> events;
  std::string caption;
  std::map<std::string, std::string> qa;

  int length() const { return static_cast<int>(frames.size()); }
  std::string answer(std::string_view question) const;

  friend bool operator==(const VideoFixture&, const VideoFixture&) = default;
};

/// Rectangular region of a scene, the image value visual programs operate
/// on.
struct ImagePatch {
  std::string scene_id;
  BBox box;
  // Provenance for debugging; tools never read it.
  std::optional<std::string> source_label;

  double left() const { return box.x0; }
  double right() const { return box.x1; }
  double upper() const { return box.y0; }
  double lower() const { return box.y1; }
  double width() const { return box.width(); }
  double height() const { return box.height(); }
  double horizontal_center() const { return box.center_x(); }
  double vertical_center() const { return box.center_y(); }

  /// Identity ignores provenance.
  friend bool operator==(const ImagePatch& a, const ImagePatch& b) {
    return a.scene_id == b.scene_id && a.box == b.box;
  }
};

ImagePatch full_patch(const SceneFixture& scene);

/// Inclusive frame range of a video.
class VideoSegment {
 public:
  VideoSegment(std::shared_ptr<const VideoFixture> video, int start_frame,
               int end_frame);

  /// The whole video.
  explicit VideoSegment(std::shared_ptr<const VideoFixture> video);

  const std::string& video_id() const { return video_->video_id; }
  int start_frame() const { return start_; }
  int end_frame() const { return end_; }
  int num_frames() const { return end_ - start_ + 1; }
  const VideoFixture& video() const { return *video_; }
  const std::shared_ptr<const VideoFixture>& video_ptr() const {
    return video_;
  }

  /// One full-frame patch per frame, ascending.
  std::vector<ImagePatch> frames() const;

  friend bool operator==(const VideoSegment& a, const VideoSegment& b) {
    return a.video_id() == b.video_id() && a.start_ == b.start_ &&
           a.end_ == b.end_;
  }

 private:
  std::shared_ptr<const VideoFixture> video_;
  int start_;
  int end_;
};

/// Raised when a fixture file does not satisfy the schema; `field()` names
/// the offending JSON path, e.g. `objects[0].box`.
class FixtureError : public std::runtime_error {
 public:
  FixtureError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

SceneFixture parse_scene_fixture(std::string_view json_text);
VideoFixture parse_video_fixture(std::string_view json_text);
SceneFixture load_scene_fixture(const std::filesystem::path& path);
VideoFixture load_video_fixture(const std::filesystem::path& path);

std::string serialize_scene_fixture(const SceneFixture& scene);
std::string serialize_video_fixture(const VideoFixture& video);

/// True when the file's top-level object carries a `frames` array.
bool is_video_fixture_file(const std::filesystem::path& path);

}  // namespace vpe
